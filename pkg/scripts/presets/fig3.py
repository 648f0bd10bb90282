'''Preset fig3: off-resonant inhomogeneous four-emitter system with one cavity excitation.

omega_C = 245 THz, omega_E = (245.1, 245.2, 245.3, 245.4) THz, (kappa, gamma, g_i) = (24.5, 0.4, 100) GHz.
Split J-Matrix, 1000 shots per time over [0, 0.25] ns.
'''

from scripts.presets.fig1 import OMEGA_C
from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig
from scripts.tcmodel import TcSystem


def fig3():
    system = TcSystem(n_emitters=4, omega_c=OMEGA_C, omega_e=(245100.0, 245200.0, 245300.0, 245400.0),
                      g=(100.0,) * 4, kappa=24.5, gamma=0.4, frame_shift=OMEGA_C)
    return ScenarioConfig(
        name='fig3',
        description='Inhomogeneous N=4 system, one initial cavity excitation, Split J-Matrix',
        system=system,
        initial=InitialConfig(cavity=1),
        algorithm=AlgorithmConfig(kind='splitj', n=50, order=2),
        run=RunConfig(kind='timeseries', t_start=0.0, t_end=0.25, num_points=200, mode='shot', shots=1000),
        seed=3,
    )


__presets__ = {
    'fig3': ('Population Series', 'Off-resonant inhomogeneous N=4 system (Split J-Matrix)', fig3),
}
