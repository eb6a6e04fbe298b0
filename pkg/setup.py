#   Copyright 2024 The parametric_lp authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.

try:
    from setuptools import setup, find_packages
except ImportError:
    from distutils.core import setup


setup(
    name="parametric_lp",
    version="0.1.0",
    description="Exact parametric linear programming: vertex enumeration, "
                "KKT certificates, ranging and continuity probes",
    author="The parametric_lp authors",
    packages=find_packages(),
    python_requires=">=3.7",
    install_requires=['numpy >= 1.17', 'scipy >= 1.6', 'pandas >= 0.25',
                      'custom_inherit >= 2.2'],
    extras_require={'test': ['pytest >= 5.0', 'hypothesis >= 5.0']},
    entry_points={'console_scripts': ['parlp = parametric_lp.cli:main']}
)
