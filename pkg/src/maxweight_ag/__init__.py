"""MaxWeight-(alpha, g) scheduling for single-hop switched queueing networks."""

from .arrivals import ArrivalModel
from .capacity import CapacityResult, slack
from .fluid import LyapunovCertificate, certificate, integrate, lyapunov, sigma_star
from .policy import Policy, decide, sample
from .schedules import ScheduleSet, truncate, validate
from .simulator import SimTrace, simulate
from .solver import FractionalSchedule, SolverReport, brute_force_max, maximize
from .utility import G, UtilityFamily, objective, weight

__version__ = "0.1.0"
