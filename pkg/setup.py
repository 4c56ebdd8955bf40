from setuptools import setup, find_packages

setup(
    name='qgroup-monodromy',
    version='1.0',
    packages=find_packages(exclude=['tests', 'tests.*']),
    install_requires=[
        'mpmath>=1.2',
        'python-dotenv',
        'sympy>=1.9',
    ],
    python_requires='>=3.8',
    entry_points={
        'console_scripts': [
            'qgroup-monodromy=qgroup_monodromy.main:cli',
        ],
    },
    extras_require={
        'test': [
            'pytest',
            'pytest-cov',
            'pytest-mock',
        ],
    },
)
