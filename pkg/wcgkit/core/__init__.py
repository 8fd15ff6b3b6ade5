from .engine import *  # noqa: F401, F403
from .errors import *  # noqa: F401, F403
from .evaluation import *  # noqa: F401, F403
from .indices import *  # noqa: F401, F403
from .lp import *  # noqa: F401, F403
from .model import *  # noqa: F401, F403
from .ompi import *  # noqa: F401, F403
from .qlearn import *  # noqa: F401, F403
