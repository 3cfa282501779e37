from setuptools import setup, find_packages
from pathlib import Path

this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text(encoding="utf-8")

setup(
    name="witt-lattice-lab",
    version="0.1.0",
    description="Exact computations with lattices over p-adic orders: rigidity, sublattice censuses, generic valuations",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main"],
    install_requires=[
        "fastapi>=0.100.0",
        "uvicorn[standard]>=0.23.0",
        "pydantic>=2.0.0",
        "pydantic-settings>=2.0.0",
        "python-dotenv>=1.0.0",
        "pandas>=2.0.0",
        "numpy>=1.24.0",
        "sympy>=1.12",
        "typing-extensions>=4.8.0",
    ],
    extras_require={"test": ["pytest>=7.4.0", "httpx>=0.24.0"]},
    entry_points={"console_scripts": ["witt-lattice=app.cli:main"]},
    python_requires=">=3.10",
)
