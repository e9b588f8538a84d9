"""This is setup.py of pyredlab"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from setuptools import setup, find_packages

# for developers: recommended way of installing is to run in this directory
# pip install -e .

setup(name="pyredlab",
      version="0.1.0",
      description="stability regions and simulation of redundancy systems",
      license="BSD 2-clause",
      packages=find_packages(exclude=["tests", "docs", "studies"]),
      python_requires=">=3.8",
      install_requires=[
          "numpy>=1.17.0",
          "scipy>=1.3.0",
          "sympy>=1.5",
          "networkx>=2.4",
          "pytest",
          "pylama",
          "pylint",
          "pytest-cov>=2.5.1",
      ],
      entry_points={
          "console_scripts": ["redlab = pyredlab.cli:main"],
      },
      zip_safe=False
      )
