from setuptools import setup, find_namespace_packages


def _read(f):
    """
    Reads in the content of the file.
    :param f: the file to read
    :type f: str
    :return: the content
    :rtype: str
    """
    return open(f, 'rb').read()


setup(
    name="wcnet",
    description="Networks of assets from the band-averaged wavelet coherence of their returns, clustered with PAM and the Gap statistic.",
    long_description=(
            _read('DESCRIPTION.rst') + b'\n' +
            _read('CHANGES.rst')).decode('utf-8'),
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Topic :: Scientific/Engineering :: Information Analysis',
        'Topic :: Office/Business :: Financial',
        'Programming Language :: Python :: 3',
    ],
    license='MIT License',
    package_dir={
        '': 'src'
    },
    packages=find_namespace_packages(where='src'),
    python_requires=">=3.8",
    install_requires=[
        "seppl>=0.3.1",
        "wai.logging",
        "python-dotenv",
        "numpy",
        "scipy",
        "pandas>=1.5",
        "pydot",
        "PyYAML",
        "joblib",
    ],
    extras_require={
        "test": [
            "pytest>=7",
        ],
    },
    entry_points={
        "console_scripts": [
            "wcnet=wcnet.tool.main:sys_main",
            "wcnet-convert=wcnet.tool.convert:sys_main",
        ],
        "class_lister": [
            "wcnet=wcnet.class_lister",
        ],
    },
    version="0.0.1",
)
