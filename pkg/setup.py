from setuptools import setup, find_packages  # Always prefer setuptools over distutils
from codecs import open  # To use a consistent encoding
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the relevant file
with open(path.join(here, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()


# This will add __version__ to version dict
version = {}
with open(path.join(here, 'secureagg/version.py'), encoding='utf-8') as (
        version_file):
    exec(version_file.read(), version)

setup(
    name='secureagg',

    version=version['__version__'],

    description='Secure in-network data aggregation with additively '
                'homomorphic encryption and aggregate signatures.',
    long_description=long_description,

    # Choose your license
    license='BSD 3-Clause',

    python_requires='>=3.8',
    install_requires=['numpy', 'pandas', 'scipy>=1.7', 'joblib'],
    extras_require={'test': ['pytest', 'hypothesis']},

    entry_points={
        'console_scripts': ['secureagg=secureagg.cli:main'],
    },

    # See https://PyPI.python.org/PyPI?%3Aaction=list_classifiers
    classifiers=[
        'Development Status :: 3 - Alpha',

        # Indicate who your project is intended for
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",

        "Topic :: Security :: Cryptography",
        "Topic :: System :: Networking",

        # Pick your license as you wish (should match "license" above)
        'License :: OSI Approved :: BSD License',

        'Programming Language :: Python :: 3.8',
    ],

    # What does your project relate to?
    keywords='homomorphic-encryption aggregate-signatures sensor-networks',

    packages=find_packages(exclude=['test']),
    package_data={'secureagg': ['data/*.json', 'data/curves/*.json']},
    include_package_data=False,
    zip_safe=False,
)
