from setuptools import find_packages
from setuptools import setup

with open("README.md", "r", encoding="utf8") as fh:
    long_description = fh.read()

setup(
    name="gerbecalc",
    version="1.0.0",
    author="gerbecalc developers",
    description="Surface holonomies of bundle gerbes, Jandl gerbes, D-branes and bi-branes with numerical checks",
    long_description=long_description,
    long_description_content_type="text/markdown",
    install_requires=["numpy", "scipy", "pandas", "networkx", "sympy", "pyyaml"],
    packages=find_packages(exclude=["test", "test.*"]),
    include_package_data=True,
    package_data={"gerbecalc": ["hyper/*.yaml", "data/fixtures/*.json"]},
    entry_points={
        "console_scripts": ["gerbecalc=gerbecalc.cli.main:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
        "Topic :: Software Development :: Libraries :: Python Modules"
    ],
    keywords=["gerbe", "holonomy", "conformal field theory", "wzw", "d-brane", "defect", "triangulation"]
)
