"""Published figures used for regression checks.

Keys are transform labels as produced by :attr:`TransformSpec.label`, plus
``"exact-dct"``.  MSE values are in absolute units (not scaled by 100).
"""

from .transforms import OpCount

OP_COUNTS = {
    "bas2008": OpCount(0, 18, 2),
    "bas2011-a0": OpCount(0, 16, 0),
    "bas2011-a1": OpCount(0, 18, 0),
    "bas2011-a2": OpCount(0, 18, 2),
    "cb2011": OpCount(0, 22, 0),
    "modcb2011": OpCount(0, 14, 0),
    "multibeam2012": OpCount(0, 24, 6),
    "proposed": OpCount(0, 14, 0),
}

# transform: (epsilon, mse, coding gain dB, efficiency %, avg PSNR dB at r=10, avg UQI at r=10)
ACCURACY = {
    "exact-dct": (0.000, 0.000e-2, 8.826, 93.991, 28.336, 0.733),
    "bas2008": (5.929, 2.378e-2, 8.120, 86.863, 27.245, 0.686),
    "bas2011-a0": (26.864, 7.104e-2, 7.912, 85.642, 26.918, 0.669),
    "bas2011-a1": (26.864, 7.102e-2, 7.913, 85.380, 26.902, 0.668),
    "bas2011-a2": (27.922, 7.832e-2, 7.763, 84.766, 26.299, 0.629),
    "cb2011": (1.794, 0.980e-2, 8.184, 87.432, 27.369, 0.697),
    "modcb2011": (8.659, 5.939e-2, 7.333, 80.897, 25.224, 0.563),
    "multibeam2012": (0.870, 0.621e-2, 8.344, 88.059, 27.567, 0.701),
    "proposed": (11.313, 7.899e-2, 7.333, 80.897, 25.726, 0.586),
}

TOLERANCE = {"epsilon": 0.005, "mse": 1e-4, "cg": 0.005, "eta": 0.05, "psnr": 0.3, "uqi": 0.02}

# Retention range over which the proposed transform beats modcb2011 in average PSNR.
PSNR_ORDERING_RANGE = range(10, 16)
