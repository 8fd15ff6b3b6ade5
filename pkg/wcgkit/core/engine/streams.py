import numpy as np

# spawn key of the decision stream; arm streams use two-element keys
POLICY_STREAM_KEY = 0x5eed


def arm_seed_sequence(seed, i, n):
    return np.random.SeedSequence(int(seed), spawn_key=(int(i), int(n)))


def policy_generator(seed):
    """Generator for tie breaks and exploration draws of a run."""
    return np.random.Generator(
        np.random.PCG64(
            np.random.SeedSequence(int(seed), spawn_key=(POLICY_STREAM_KEY, ))))


class ArmStreams(object):
    """One reproducible uniform stream per arm.

    Arm n of class i always draws from the stream derived from
    (seed, i, n), so its randomness does not depend on how many other arms
    the system has. Draws are buffered ``chunk`` steps at a time.

    Args:
        seed (int): Master seed.
        counts (array): Number of arms per class.
        chunk (int): Steps drawn per refill.
    """

    def __init__(self, seed, counts, chunk=64):
        self.seed = int(seed)
        self.chunk = int(chunk)
        self._generators = [
            np.random.Generator(np.random.PCG64(arm_seed_sequence(seed, i, n)))
            for i, count in enumerate(counts) for n in range(int(count))
        ]
        self._buffer = np.empty((len(self._generators), 0, 2))
        self._cursor = 0

    def __len__(self):
        return len(self._generators)

    def _refill(self):
        if self._generators:
            self._buffer = np.stack(
                [g.random((self.chunk, 2)) for g in self._generators])
        else:
            self._buffer = np.empty((0, self.chunk, 2))
        self._cursor = 0

    def draw(self):
        """Uniforms for (transition, reward) of every arm for one step."""
        if self._cursor >= self._buffer.shape[1]:
            self._refill()
        column = self._buffer[:, self._cursor, :]
        self._cursor += 1
        return column[:, 0], column[:, 1]
