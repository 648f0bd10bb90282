'''Preset fig1: resonant single emitter initialized with two cavity excitations.

N = 1, omega_C = omega_E1 = 245 THz, (kappa, gamma, g1) = (24.5, 0.4, 100) GHz.
Split J-Matrix with n = 100 at 250 equally spaced times in [0, 0.25] ns, 1000 shots per time.
'''

from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig
from scripts.tcmodel import TcSystem

OMEGA_C = 245000.0  # GHz


def resonant_system(pump_amp=0.0):
    return TcSystem(n_emitters=1, omega_c=OMEGA_C, omega_e=(OMEGA_C,), g=(100.0,), kappa=24.5, gamma=0.4,
                    pump_amp=pump_amp, frame_shift=OMEGA_C)


def fig1():
    return ScenarioConfig(
        name='fig1',
        description='Resonant single emitter, two initial cavity excitations, Split J-Matrix',
        system=resonant_system(),
        initial=InitialConfig(cavity=2),
        algorithm=AlgorithmConfig(kind='splitj', n=100, order=2),
        run=RunConfig(kind='timeseries', t_start=0.0, t_end=0.25, num_points=250, mode='shot', shots=1000),
        seed=1,
    )


__presets__ = {
    'fig1': ('Population Series', 'Resonant N=1 decay from two cavity excitations (Split J-Matrix)', fig1),
}
