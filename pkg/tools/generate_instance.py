import argparse
import os.path as osp

from mmcv import Config

from wcgkit.apis import get_root_logger
from wcgkit.core import dump_instance, validate_instance
from wcgkit.instances import build_instance


def parse_args():
    parser = argparse.ArgumentParser(
        description='Write a generated instance to JSON')
    parser.add_argument(
        'config', help='scenario config whose instance is generated')
    parser.add_argument('out', help='output JSON file')
    parser.add_argument(
        '--scale', type=int, default=None, help='scale h of the output')
    parser.add_argument(
        '--horizon', type=int, default=None, help='horizon T of the output')
    return parser.parse_args()


def main():
    args = parse_args()
    logger = get_root_logger()
    cfg = Config.fromfile(args.config)
    instance_cfg = cfg.instance
    if not isinstance(instance_cfg, dict):
        if not osp.isfile(instance_cfg):
            instance_cfg = osp.join(osp.dirname(args.config), instance_cfg)
        instance_cfg = dict(file=instance_cfg)
    instance_cfg = dict(instance_cfg)
    if args.horizon is not None:
        instance_cfg = dict(instance_cfg, horizon=args.horizon)
    inst = build_instance(instance_cfg, scale=args.scale)
    report = validate_instance(inst)
    if not report.is_valid:
        raise ValueError('generated instance is invalid: {}'.format(
            report.violations))
    dump_instance(inst, args.out)
    logger.info('instance with %d classes saved to %s', inst.num_classes,
                args.out)


if __name__ == '__main__':
    main()
