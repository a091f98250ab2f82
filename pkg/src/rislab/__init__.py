"""Link-level laboratory for a RIS-assisted full-duplex two-way SSK system.

The same physical link is implemented twice: as a Monte Carlo simulator of
the per-element channel model (``channel``, ``link``, ``montecarlo``) and as
a closed-form analytical chain (``specfun``, ``analytic``).  The two are
cross-verified on average bit error probability, outage probability, and
throughput.  ``cli`` drives named experiment presets and emits CSV curves.
"""

__version__ = "0.1.0"

from . import analytic, channel, cli, link, montecarlo, specfun

__all__ = ["analytic", "channel", "cli", "link", "montecarlo", "specfun", "__version__"]
