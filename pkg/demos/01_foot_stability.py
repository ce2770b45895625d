"""Walk through the stability test for a single foot-sized contact."""

import numpy as np

from contact_cwc import ContactPatch, Wrench, check_wrench, reconstruct_forces

# 22 cm x 12 cm sole on rubber-ish ground
foot = ContactPatch(X=0.11, Y=0.06, mu=0.7)
weight = 60 * 9.81

standing = Wrench(0, 0, weight, 0, 0, 0)
report = check_wrench(foot, standing)
print("standing still:", report.member, "margin", round(report.min_margin, 2))
print("  yaw torque allowed in", np.round([report.yaw.tau_min, report.yaw.tau_max], 2))

# push forward while rolling onto the toes
pushing = Wrench(150, 0, weight, 0, -0.08 * weight, 0)
report = check_wrench(foot, pushing)
print("pushing off:", report.member, "zmp", np.round(report.zmp, 3))
print("  yaw range shrinks to", np.round([report.yaw.tau_min, report.yaw.tau_max], 2),
      "and the safest yaw is", round(report.yaw.tau_safe, 2))

# same push, but twist harder than friction allows
twisting = Wrench(150, 0, weight, 0, -0.08 * weight, report.yaw.tau_max + 5)
report = check_wrench(foot, twisting)
print("twisting:", report.member, "violated rows", report.violated)

forces = reconstruct_forces(foot, pushing).as_array()
print("corner forces for the push (rows C1..C4):")
print(np.round(forces, 1))
