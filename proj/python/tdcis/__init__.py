from ._tdcis import *  # noqa: F401,F403
