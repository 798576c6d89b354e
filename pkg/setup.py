# STLA -- small-time local attainability toolkit
# Copyright (C) 2014 STLA contributors.  See AUTHORS.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

from setuptools import setup, find_packages
import os
import re

READMEFILE = "README"
VERSIONFILE = os.path.join("stla", "_version.py")
VSRE = r"^__version__ = ['\"]([^'\"]*)['\"]"


def get_version():
    verstrline = open(VERSIONFILE, "rt").read()
    mo = re.search(VSRE, verstrline, re.M)
    if mo:
        return mo.group(1)
    else:
        raise RuntimeError("Unable to find version string in %s." %
                           VERSIONFILE)


setup(
    name="stla",
    version=get_version(),
    packages=find_packages(exclude=['ez_setup', 'examples']),
    zip_safe=False,
    include_package_data = True,
    package_data={
        'stla': ['config_spec.ini', 'templates/*.txt'],
        'stla.tests': ['*.json', '*.ini'],
        },
    # scripts and dependencies
    install_requires=[
        'setuptools',
        'numpy',
        'jinja2',
        'ConfigObj',
        ],
    extras_require={
        'test': ['pytest>=2.3.1', 'hypothesis'],
        },
    tests_require=['pytest>=2.3.1', 'hypothesis'],
    entry_points="""\
        [console_scripts]
        stla = stla.commands:main_cli
        """,
    license='AGPLv3',
    author='STLA contributors',
    long_description=open(READMEFILE).read(),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU Affero General Public License v3 or later (AGPLv3+)",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        'Programming Language :: Python :: 3',
        "Topic :: Scientific/Engineering :: Mathematics"
        ],
    )
