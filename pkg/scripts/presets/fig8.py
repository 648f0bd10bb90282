'''Preset fig8: g2(0) of a driven non-resonant cavity with one emitter, hybrid WML.

omega_C = 245 THz, omega_E1 - omega_C = 180 MHz, (kappa, gamma, g) = (1.8, 0.1, 0.2) GHz,
E_P = kappa / 2. Steady state at 10 ns, 20 batches of 1500 shots. Reference value 0.842.
delta <= 0.005 keeps the sampling bias rate delta c well below kappa.
'''

from scripts.presets.fig1 import OMEGA_C
from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig
from scripts.tcmodel import TcSystem


def fig8():
    system = TcSystem(n_emitters=1, omega_c=OMEGA_C, omega_e=(OMEGA_C + 0.18,), g=(0.2,), kappa=1.8, gamma=0.1,
                      pump_amp=0.9, frame_shift=OMEGA_C)
    return ScenarioConfig(
        name='fig8',
        description='Median-of-means g2(0), driven non-resonant N=1 system, hybrid WML',
        system=system,
        initial=InitialConfig(cavity=1),
        algorithm=AlgorithmConfig(kind='hybrid', n=1000, max_delta=0.005),
        run=RunConfig(kind='g2', steady_time=10.0, batches=20, shots_per_batch=1500, reference_g2=0.842),
        seed=8,
    )


__presets__ = {
    'fig8': ('G2 Estimates', 'g2(0) of the driven non-resonant N=1 system (hybrid WML)', fig8),
}
