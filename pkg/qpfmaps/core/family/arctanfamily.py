"""Arctan families f = arctan(alpha x) - beta A (1 + cos 2 pi theta)

Two scalings of the drive are provided: ``ArctanIntro`` with A = 1 is the
one used for the golden mean experiment, ``ArctanQuarterPi`` with A = pi/4
keeps the drive range inside (0, pi/2] for beta in [0, 1].
"""
# Standard imports
import math

# Custom imports
import numpy as np

from .drivefamily import DriveFamily, CosineDrive


class ArctanFamily(CosineDrive, DriveFamily):

    h_sup = math.pi / 2.0

    def h(self, t):
        return np.arctan(t)

    def h_prime(self, t):
        return 1.0 / (1.0 + t ** 2)

    def h_second(self, t):
        return -2.0 * t / (1.0 + t ** 2) ** 2

    def h_inverse(self, z):
        return np.tan(z)


class ArctanIntro(ArctanFamily):
    kind = "ArctanIntro"
    amplitude = 1.0


class ArctanQuarterPi(ArctanFamily):
    kind = "ArctanQuarterPi"
    amplitude = math.pi / 4.0
