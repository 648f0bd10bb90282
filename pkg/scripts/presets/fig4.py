'''Preset fig4: nine emitters initialized with three cavity excitations.

omega_C = 245 THz, omega_E - omega_C = (100, -400, -100, 0, 100, 100, 400, -200, -500) GHz,
(kappa, gamma, g_i) = (24.5, 0.4, 100) GHz. Split J-Matrix with n = 45 at 150 times in
[0, 0.25] ns, 1000 shots per time.

The fourth detuning is taken as 0 GHz; a second published listing gives 400 GHz for that emitter.
The three excitations start in the cavity with every emitter in |0>.
'''

from scripts.presets.fig1 import OMEGA_C
from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig
from scripts.tcmodel import TcSystem

DETUNINGS = (100.0, -400.0, -100.0, 0.0, 100.0, 100.0, 400.0, -200.0, -500.0)


def fig4():
    system = TcSystem(n_emitters=9, omega_c=OMEGA_C, omega_e=tuple(OMEGA_C + d for d in DETUNINGS),
                      g=(100.0,) * 9, kappa=24.5, gamma=0.4, frame_shift=OMEGA_C)
    return ScenarioConfig(
        name='fig4',
        description='N=9 system, three initial cavity excitations, Split J-Matrix '
                    '(fourth detuning 0 GHz; alternative listing 400 GHz)',
        system=system,
        initial=InitialConfig(cavity=3),
        algorithm=AlgorithmConfig(kind='splitj', n=45, order=2),
        run=RunConfig(kind='timeseries', t_start=0.0, t_end=0.25, num_points=150, mode='shot', shots=1000),
        seed=4,
    )


__presets__ = {
    'fig4': ('Population Series', 'Non-resonant N=9 system from three excitations (Split J-Matrix)', fig4),
}
