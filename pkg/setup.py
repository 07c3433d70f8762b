from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="ilpsat",
    version="0.1.0",
    description="ILP presolve as a preprocessor for weighted partial MaxSAT.",
    long_description=long_description,
    long_description_content_type="text/markdown",

    packages=find_packages(include=["ilpsat*"]),

    python_requires=">=3.9",

    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],

    install_requires=[
        # Core
        "python-dotenv",
        "numpy",
        "python-sat",

        # Telemetry
        "opentelemetry-api==1.38.0",
        "opentelemetry-sdk==1.38.0",
        "opentelemetry-proto==1.38.0",
        "opentelemetry-semantic-conventions==0.59b0",
        "opentelemetry-exporter-otlp-proto-http==1.38.0",
    ],

    extras_require={
        "test": [
            "pytest",
        ],
    },

    entry_points={
        "console_scripts": [
            "ilpsat=ilpsat.cli:main",
        ],
    },

    keywords=[
        "maxsat",
        "presolve",
        "integer programming",
        "cnf encoding",
        "pseudo-boolean",
    ],
)
