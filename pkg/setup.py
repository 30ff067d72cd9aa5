import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="qareader",
    version="0.1.0",
    description="Summary-attentive coattention reader for extractive question answering",
    license="MIT",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    package_data={"qareader": ["resources/*.txt"]},
    python_requires=">= 3.10",
    install_requires=[
        "numpy>=1.25",
        "pandas>=2.0",
        "pydantic>=2.4",
        "PyYAML>=6.0",
        "tqdm>=4.65",
    ],
    entry_points={"console_scripts": ["qareader=qareader.__main__:run"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
