"""Monte Carlo BER performance databases and confidence-region mining."""

from bermine._bermine import *  # noqa: F401,F403
from bermine._bermine import __doc__  # noqa: F401

__version__ = "0.1.0"
