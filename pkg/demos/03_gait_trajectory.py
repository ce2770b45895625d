"""Synthesize a stance-phase wrench trace and screen it with the CLI."""

import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

t = np.linspace(0, 0.6, 61)
weight = 60 * 9.81
phase = t / t[-1]

fz = weight * (1 + 0.2 * np.sin(2 * np.pi * phase))
fx = 120 * np.sin(np.pi * phase) - 60
fy = 15 * np.sin(2 * np.pi * phase)
# center of pressure rolls from heel to toe
cop_x = -0.09 + 0.19 * phase
taux = 0.02 * fz * np.sin(np.pi * phase)
tauy = -cop_x * fz
# a yaw spike near toe-off
tauz = 4 * np.sin(np.pi * phase) + 45 * np.exp(-((phase - 0.9) / 0.03) ** 2)

rows = np.column_stack([t, fx, fy, fz, taux, tauy, tauz])
path = Path(tempfile.mkdtemp()) / "stance.csv"
np.savetxt(path, rows, delimiter=",", header="t,fx,fy,fz,taux,tauy,tauz", comments="", fmt="%.6f")

cmd = [sys.executable, "-m", "contact_cwc", "trajectory", "--X", "0.11", "--Y", "0.06",
       "--mu", "0.7", "--input", str(path), "--scale-area", "0.5"]
result = subprocess.run(cmd, capture_output=True, text=True)
print("\n".join(result.stdout.splitlines()[-4:]))
print("exit code", result.returncode)
