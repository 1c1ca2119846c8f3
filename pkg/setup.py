"""
Setup script for the cascade influence toolkit.
"""
from setuptools import setup, find_packages

setup(
    name="cascade-influence",
    version="0.1.0",
    packages=find_packages(exclude=["test", "test.*", "examples", "examples.*"]),
    install_requires=[
        "pydantic>=2.0.0",
        "regex>=2022.0.0",
        "numpy>=1.24.0",
        "scipy>=1.10.0",
    ],
    entry_points={
        "console_scripts": [
            "cascade-influence=src.cli:main",
        ],
    },
)
