from setuptools import find_packages, setup

with open("README.md", "r") as f:
    long_description = f.read()

setup(
    name="k3strata",
    version="0.1.0",
    description="Exact computations on the height strata of polarized K3 surfaces.",
    packages=find_packages(exclude=["tests", "tests.*", "example", "example.*"]),
    package_data={"k3strata": ["conf/*.yaml"]},
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.10",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    install_requires=["pyYAML>=3.0.0", "numpy>=1.20", "sympy>=1.9"],
    extras_require={"test": ["pytest>=7.0", "hypothesis>=6.0"]},
    entry_points={"console_scripts": ["k3strata = k3strata.cli:main"]},
)
