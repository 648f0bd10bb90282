'''Preset fig5: two emitters, hybrid WML in the rotating frame.

omega_C = 245 GHz, omega_E - omega_C = (0.4, 1.3) GHz, (kappa, gamma, g) = (160, 19.6, 1000) MHz.
19 equally spaced times in [0, 3] ns. The sampling bias of a run grows like delta c t, so
the step count is raised until delta = c t / n <= 0.0005.
One initial cavity excitation.
'''

from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig
from scripts.tcmodel import TcSystem

OMEGA_C = 245.0  # GHz


def fig5():
    system = TcSystem(n_emitters=2, omega_c=OMEGA_C, omega_e=(OMEGA_C + 0.4, OMEGA_C + 1.3), g=(1.0, 1.0),
                      kappa=0.16, gamma=0.0196, frame_shift=OMEGA_C)
    return ScenarioConfig(
        name='fig5',
        description='N=2 system, hybrid WML (fixed interaction by a J-matrix dilation), averaged channel',
        system=system,
        initial=InitialConfig(cavity=1),
        algorithm=AlgorithmConfig(kind='hybrid', n=100, max_delta=0.0005),
        run=RunConfig(kind='timeseries', t_start=0.0, t_end=3.0, num_points=19, mode='exact', shots=1000),
        seed=5,
    )


__presets__ = {
    'fig5': ('Population Series', 'N=2 system in the rotating frame (hybrid WML)', fig5),
}
