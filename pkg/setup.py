#!/usr/bin/env python3
from setuptools import setup, find_packages

setup(
    name='pysafeset',
    version='0.1',
    description='data-driven synthesis of safe polynomial controllers',
    packages=find_packages(include=['pysafeset', 'pysafeset.*']),
    entry_points={
        'console_scripts': [
            'pysafeset=pysafeset.cli.pysafeset:main',
        ]
    },
    install_requires=[
        'scipy',
        'pandas',
        'PyYAML',
        'numpy',
        'py_expression_eval',
        'cvxpy'
    ],
    extras_require={
        'full':  [
            'cvxopt'
        ]
    }
)
