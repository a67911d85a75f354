from setuptools import setup, find_packages

setup(
    packages=find_packages(exclude=("test", "test.*", "examples", "examples.*")),
    extras_require={
        'test': [
            'pytest>=7.0',
        ]
    },
)
