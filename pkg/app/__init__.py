"""
homcount

"""

__version__ = '1.0.0'
__author__ = 'dhkim <kimdognhwi94@gmail.com>'

__all__ = ['cli', 'core', 'models', 'utils']
