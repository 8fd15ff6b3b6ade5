import mmcv

from wcgkit.core import WcgInstance, load_instance
from wcgkit.utils import build_from_cfg
from .registry import INSTANCES


def build_instance(cfg, scale=None):
    """Instance from a JSON path, an inline description or a generator cfg.

    Args:
        cfg (str | dict): Path of an instance file, a dict with a ``file``
            key (and optional overrides ``scale``, ``horizon``), a full
            instance dict with ``classes``, or a generator config with a
            registered ``type``.
        scale (int, optional): Scale h overriding the configured one.
    """
    if mmcv.is_str(cfg):
        inst = load_instance(cfg)
    elif isinstance(cfg, dict) and 'file' in cfg:
        inst = load_instance(cfg['file'])
        if 'horizon' in cfg:
            inst = WcgInstance(
                inst.classes,
                inst.base_counts,
                constraints=inst.constraints,
                scale=cfg.get('scale', inst.scale),
                horizon=cfg['horizon'],
                discount=inst.discount)
        elif 'scale' in cfg:
            inst = inst.rescale(cfg['scale'])
    elif isinstance(cfg, dict) and 'classes' in cfg:
        inst = WcgInstance.from_dict(cfg)
    else:
        inst = build_from_cfg(cfg, INSTANCES)
    if scale is not None and scale != inst.scale:
        inst = inst.rescale(scale)
    return inst
