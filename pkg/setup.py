from setuptools import setup, find_packages
import os


def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()


VERSION = '0.1.0'
AUTHOR = 'The udepth authors'
EMAIL = 'udepth-dev@googlegroups.com'
URL = 'https://github.com/udepth/udepth.git'
DESCRIPTION = read('README.rst')
KEYWORDS = 'depth,completion,lidar,uncertainty,kitti,autodiff'

setup(
    name='udepth',
    version=VERSION,
    description='Uncertainty-driven depth completion toolkit',
    long_description=DESCRIPTION,
    author=AUTHOR,
    author_email=EMAIL,
    url=URL,
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.7',
    install_requires=['numpy>=1.20', 'docopt', 'bitstring>=3.1', 'matplotlib>=3.5'],
    keywords=KEYWORDS,
    entry_points={
        'console_scripts': [
            'udepth-tool=udepth.bin.udepth_tool:_main',
        ]
    },
)
