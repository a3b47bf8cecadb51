__title__ = 'pyschwa'
__version__ = '0.3.0'

__summary__ = 'Schwa deletion for Hindi and Punjabi grapheme-to-phoneme conversion'
__uri__ = 'https://github.com/pyschwa/pyschwa'

__credits__ = """
pyschwa is maintained by the pyschwa developers.

The phone inventory, codepoint maps and phonological feature table are
documented in ``doc/inventory.rst``.
"""


def get_copyright_notice() -> str:
    from importlib_resources import read_text
    return read_text('pyschwa.COPYING', 'pyschwa.rst', encoding='utf-8')
