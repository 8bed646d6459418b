# -*- coding: utf-8 -*-

# Generated from pyproject.toml with dephell; regenerate rather than edit.

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


import os.path

readme = ''
here = os.path.abspath(os.path.dirname(__file__))
readme_path = os.path.join(here, 'README.rst')
if os.path.exists(readme_path):
    with open(readme_path, 'rb') as stream:
        readme = stream.read().decode('utf8')


setup(
    long_description=readme,
    name='ces_solver',
    version='0.1.0',
    description='Exact solutions, scattering amplitudes and a numerical oracle for the partner potentials V± = m²/(eˣ-1) ± (m/2)eˣ/(eˣ-1)^{3/2}.',
    python_requires='==3.*,>=3.8.0',
    author='ces_solver developers',
    license='MIT',
    entry_points={"console_scripts": ["ces-solver = ces_solver.cli:main"]},
    packages=['ces_solver', 'ces_solver.examples', 'ces_solver.tests'],
    package_dir={"": "."},
    install_requires=['graphviz>=0.13.2', 'littleutils>=0.2.1', 'networkx>=2.4', 'numpy>=1.20', 'pandas>=1.5'],
    extras_require={"dev": ["black>=18.3a0", "hypothesis>=6.0", "pytest>=5.3", "recommonmark>=0.6.0", "sphinx>=2.2", "sphinx-rtd-theme>=0.4.3"], "examples": ["matplotlib"]},
)
