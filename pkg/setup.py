# encoding: utf-8
"""
Setup script for pyschwa.

This script is meant for packagers and developers. Users should install the
package with pip, see README.rst.
"""

from setuptools import setup, find_packages

import sys
import os


def exec_file(path):
    """Execute a python file and return the `globals` dictionary."""
    namespace = {}
    with open(path, 'rb') as f:
        exec(f.read(), namespace, namespace)
    return namespace


if __name__ == '__main__':
    sys.path.append(os.path.dirname(__file__))
    metadata = exec_file('src/pyschwa/__init__.py')
    setup(
        name='pyschwa',
        version=metadata['__version__'],
        description=metadata['__summary__'],
        packages=find_packages('src'),
        package_dir={'': 'src'},
        package_data={
            'pyschwa.data': ['*.tsv', '*.rules'],
            'pyschwa.COPYING': ['*.rst'],
        },
        zip_safe=False,
        include_package_data=True,
        install_requires=[
            'importlib_resources',
            'numpy',
        ],
        entry_points={
            'console_scripts': ['pyschwa = pyschwa.cli:main_exit'],
        },
    )
