from wcgkit.utils import Registry

POLICIES = Registry('policy')
