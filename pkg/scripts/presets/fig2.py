'''Preset fig2: driven resonant single emitter initialized with one photon.

Same system as fig1 with a coherent drive E_P = kappa / 2; 250 times in [0, 0.25] ns,
Split J-Matrix with n = 100, 1000 shots per time.
'''

from scripts.presets.fig1 import resonant_system
from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig


def fig2():
    return ScenarioConfig(
        name='fig2',
        description='Driven resonant single emitter, one initial photon, E_P = kappa/2, Split J-Matrix',
        system=resonant_system(pump_amp=24.5 / 2),
        initial=InitialConfig(cavity=1),
        algorithm=AlgorithmConfig(kind='splitj', n=100, order=2),
        run=RunConfig(kind='timeseries', t_start=0.0, t_end=0.25, num_points=250, mode='shot', shots=1000),
        seed=2,
    )


__presets__ = {
    'fig2': ('Population Series', 'Driven resonant N=1 system from one photon (Split J-Matrix)', fig2),
}
