from setuptools import setup, find_packages

setup(
    name='latticedex',
    version='1.0.0',
    packages=find_packages(include=['latticedex', 'latticedex.*']),
    python_requires='>=3.9',
    install_requires=[
        'numpy',
        'sympy',
        'scipy',
        'pydantic>=2',
        'pyyaml',
    ],
    extras_require={
        'test': ['pytest'],
    },
)
