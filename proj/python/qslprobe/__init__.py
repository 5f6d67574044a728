"""Black-box gate-time amplification and quantum-speed-limit energy inference.

The compiled core lives in ``_qslprobe``; this package re-exports it.
Hamiltonian matrices are expressed in angular-frequency units (rad/s);
reported energies are joules, times are seconds.
"""

from _qslprobe import *  # noqa: F401,F403
from _qslprobe import hbar  # noqa: F401
