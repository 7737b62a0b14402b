#!/usr/bin/env python3
"""
Setup script for the H-stationary Lagrangian verification lab.
Installs the hstationary_lab package and the hstationary-lab command.
"""

from setuptools import setup, find_packages

with open("requirements.txt") as f:
    requirements = [line for line in f.read().splitlines() if line and not line.startswith("#")]

setup(
    name="hstationary-lab",
    version="1.0.0",
    description="Numerical verification of explicit H-stationary Lagrangian immersions in complex space forms",
    author="hstationary-lab contributors",
    packages=find_packages(exclude=("tests", "tests.*", "examples", "examples.*")),
    install_requires=requirements,
    entry_points={
        'console_scripts': [
            'hstationary-lab=hstationary_lab.cli:main',
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
    ],
    python_requires='>=3.8',
)
