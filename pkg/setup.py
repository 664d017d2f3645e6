from setuptools import find_packages, setup


setup(
    name="jamsync",
    version="0.0.1",
    description="Jammer-resilient frame synchronization for multi-antenna receivers",
    url="https://github.com/Zeletochoy/jamsync",
    author="Antoine Lecubin",
    author_email="antoinelecubin@msn.com",
    packages=find_packages(exclude=["tests"]),
    license="beerware",
    python_requires=">=3.9",
    install_requires=[
        "attrs>=20.2.0",
        "click>=8.0",
        "numpy>=1.21",
        "python-dotenv>=0.19.2",
    ],
    entry_points={
        "console_scripts": [
            "jamsync = jamsync.cli:cli",
            "jamsync-sweep = jamsync.cli.sweep:cli",
            "jamsync-detect = jamsync.cli.detect:cli",
            "jamsync-selftest = jamsync.cli.selftest:cli",
        ],
    },
)
