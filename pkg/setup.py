import os

from setuptools import setup, find_packages

dir_path = os.path.dirname(os.path.realpath(__file__))

with open(os.path.join(dir_path, 'todalab', 'VERSION.txt'), 'r') as f:
    version = f.read().strip()

with open(os.path.join(dir_path, 'todalab', 'requirements.txt'), 'r') as f:
    requirements = [line.strip() for line in f.read().splitlines() if line.strip()]

with open(os.path.join(dir_path, 'README.md'), 'r', encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='todalab',
    long_description=long_description,
    long_description_content_type='text/markdown',
    version=version,
    packages=find_packages(exclude=['unittest', 'unittest.*']),
    include_package_data=True,
    package_data={'todalab': ['VERSION.txt', 'requirements.txt']},
    install_requires=requirements,
    license='Apache 2.0',
    description='Numerical laboratory for the Toda lattice and its finite-gap spectral theory',
    entry_points={
        'console_scripts': [
            'toda-lab=todalab.lab.cli:main',
        ]
    }
)
