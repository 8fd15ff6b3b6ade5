from wcgkit.utils import build_from_cfg
from .registry import POLICIES


def build_policy(cfg, default_args=None):
    return build_from_cfg(cfg, POLICIES, default_args)
