"""Expose of the family classes, jets and the analysis strip"""
from .abstractfamily import AbstractFamily, Partials, bracketed_inverse
from .arctanfamily import ArctanIntro, ArctanQuarterPi
from .hqfamily import HqDrive, SineDrive
from .harperfamily import Harper
from .customfamily import Custom
from .jets import Jet2, jet_forward, jet_backward, compose_jets, propagate
from .strip import Strip
