import numpy as np


class Seeder(object):
    """
    Deterministic source of random numbers for presets and property sampling.

    All draws come from a numpy Generator on the PCG64 bit generator so that a fixed seed
    reproduces the same operators and sample points on every platform.
    """

    rng_name = 'PCG64'

    def __init__(self, seed):
        self.seed = int(seed)
        self.reset()

    def reset(self):
        self.np_random = np.random.Generator(np.random.PCG64(self.seed))
