'''Preset fig9: g2(0) of a driven cavity with eight inhomogeneous emitters.

omega_E - omega_C = (20, 50, 75, 40, 15, 30, 57, 15) GHz, (kappa, gamma, g) = (2.83, 0.8, 10) GHz,
E_P = kappa / 2. Split J-Matrix to the steady state at 2 ns, 13 batches of 3000 shots.
The running median settles near 0.867.
'''

from scripts.presets.fig1 import OMEGA_C
from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig
from scripts.tcmodel import TcSystem

DETUNINGS = (20.0, 50.0, 75.0, 40.0, 15.0, 30.0, 57.0, 15.0)


def fig9():
    system = TcSystem(n_emitters=8, omega_c=OMEGA_C, omega_e=tuple(OMEGA_C + d for d in DETUNINGS),
                      g=(10.0,) * 8, kappa=2.83, gamma=0.8, pump_amp=2.83 / 2, frame_shift=OMEGA_C)
    return ScenarioConfig(
        name='fig9',
        description='Median-of-means g2(0), driven inhomogeneous N=8 system, Split J-Matrix',
        system=system,
        initial=InitialConfig(cavity=1),
        algorithm=AlgorithmConfig(kind='splitj', n=200, order=2),
        run=RunConfig(kind='g2', steady_time=2.0, batches=13, shots_per_batch=3000, reference_g2=0.867),
        seed=9,
    )


__presets__ = {
    'fig9': ('G2 Estimates', 'g2(0) of the driven inhomogeneous N=8 system (Split J-Matrix)', fig9),
}
