import logging
import random

import numpy as np

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def set_random_seed(seed):
    """Seed the global ``random`` and ``numpy`` state of a script.

    Simulations never read the global state; they draw from explicit
    substreams of the returned seed sequence.
    """
    random.seed(seed)
    np.random.seed(seed)
    return np.random.SeedSequence(seed)


def get_root_logger(log_level=logging.INFO, log_file=None):
    logger = logging.getLogger()
    if not logger.hasHandlers():
        logging.basicConfig(format=LOG_FORMAT, level=log_level)
    else:
        logger.setLevel(log_level)
    if log_file is not None:
        known = [
            getattr(h, 'baseFilename', None) for h in logger.handlers
        ]
        file_handler = logging.FileHandler(log_file, 'a')
        if file_handler.baseFilename in known:
            file_handler.close()
        else:
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
            logger.addHandler(file_handler)
    return logger
