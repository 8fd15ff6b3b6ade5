from wcgkit.utils import Registry

INSTANCES = Registry('instance')
