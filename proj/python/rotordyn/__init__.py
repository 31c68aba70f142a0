from ._rotordyn import *  # noqa: F401,F403
