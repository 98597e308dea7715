#
# File: setup.py
#
from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="zxft",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    description="ZX instrument networks, Pauli webs and fault-tolerance flavors",
    long_description=long_description,
    long_description_content_type="text/markdown",
    install_requires=[
        "click",
        "joblib",
        "pandas",
        "matplotlib",
        "numpy",
        "torch",
        "termcolor",
        "networkx",
        "stim",
        "pytest",
    ],
    entry_points={
        "console_scripts": ["zxft=zxft.cli:main"],
    },
    python_requires=">=3.8",
    test_requires=["pytest"],
    zip_safe=True,
    license="MIT",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
    ],)
