'''Preset fig6: four emitters, hybrid WML in the rotating frame.

omega_C = 245 GHz, omega_E - omega_C = (0.2, 0.5, 0.75, 1) GHz, (kappa, gamma, g) = (160, 22.5, 800) MHz.
11 equally spaced times in [0, 2] ns with delta = c t / n <= 0.001, one initial cavity excitation.
'''

from scripts.presets.fig5 import OMEGA_C
from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig
from scripts.tcmodel import TcSystem


def fig6():
    system = TcSystem(n_emitters=4, omega_c=OMEGA_C, omega_e=tuple(OMEGA_C + d for d in (0.2, 0.5, 0.75, 1.0)),
                      g=(0.8,) * 4, kappa=0.16, gamma=0.0225, frame_shift=OMEGA_C)
    return ScenarioConfig(
        name='fig6',
        description='N=4 system, hybrid WML, averaged channel',
        system=system,
        initial=InitialConfig(cavity=1),
        algorithm=AlgorithmConfig(kind='hybrid', n=100, max_delta=0.001),
        run=RunConfig(kind='timeseries', t_start=0.0, t_end=2.0, num_points=11, mode='exact', shots=1000),
        seed=6,
    )


__presets__ = {
    'fig6': ('Population Series', 'N=4 system in the rotating frame (hybrid WML)', fig6),
}
