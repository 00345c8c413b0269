from setuptools import setup, find_packages

setup(
    name="sparsefactor",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "click>=8.0.0",  # CLI interface
        "rich>=13.0.0",  # Terminal UI and log handler
        "pyyaml>=6.0.0",  # Configuration management
        "numpy>=1.22.0",  # Dense linear algebra
        "scipy>=1.8.0",  # CSR products and MatrixMarket I/O
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.3",
            "pytest-cov>=4.1.0",
            "hypothesis>=6.80.0",
            "black>=23.12.1",
            "flake8>=6.1.0",
            "isort>=5.13.2",
        ],
    },
    entry_points={
        "console_scripts": [
            "sparsefactor=sparsefactor.cli:main",
        ],
    },
    description="Sparse full-rank factorization of square matrices and the PSF-Attn block",
    python_requires=">=3.8",
)
