from setuptools import find_packages, setup
setup(
    name='hyperball',
    version='0.0.1',
    packages=find_packages(exclude=['tests', 'examples']),  # Include all the python modules except `tests`.
    description='Hyperball',
    long_description='Numerical checks for relative Poincare series on the complex hyperbolic ball.',
    install_requires=[
        'numpy>=1.24',
        'scipy>=1.10',
        'sympy>=1.12',
    ],
    classifiers=[
        'Programming Language :: Python',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    entry_points={
        'console_scripts': [
            'hyperball = hyperball.cli:main'
        ]
    },
)
