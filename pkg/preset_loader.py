import pathlib
import dataclasses
import typing
import importlib.util

from scripts.errors import ConfigInvalid
from scripts.scenario import ScenarioConfig

# resolved from this file so the presets are found whatever the working directory
PRESETPATH = pathlib.Path(__file__).resolve().parent / pathlib.Path("scripts/presets")
CATEGORIES = ('Population Series', 'G2 Estimates')


@dataclasses.dataclass(frozen=True)
class PresetSpec:
    name: str
    module_name: str
    category: str
    description: str
    method: typing.Callable[[], ScenarioConfig]

    def build(self) -> ScenarioConfig:
        '''Calls the builder and checks it returns the scenario it is registered under'''
        config = self.method()
        if not isinstance(config, ScenarioConfig):
            raise ConfigInvalid(f'Preset {self.name} ({self.module_name}.py) built a {type(config).__name__}, '
                                f'not a ScenarioConfig')
        if config.name != self.name:
            raise ConfigInvalid(f'Preset {self.name} ({self.module_name}.py) built a scenario named {config.name!r}')
        return config


class PresetLoader:
    def __init__(self, preset_path: typing.Optional[pathlib.Path] = None):
        self._preset_path = preset_path or PRESETPATH
        self._presets: dict[str, PresetSpec] = {}
        self._load_presets()

    @staticmethod
    def load_module_lazy(path: pathlib.Path):
        spec = importlib.util.spec_from_file_location(path.stem, path)
        loader = importlib.util.LazyLoader(spec.loader)
        spec.loader = loader
        mod = importlib.util.module_from_spec(spec)
        loader.exec_module(mod)
        return mod

    def _load_presets(self):
        for py_file in sorted(self._preset_path.glob("*.py")):
            mod = PresetLoader.load_module_lazy(py_file)
            try:
                mod_presets = mod.__presets__
            except AttributeError:
                continue  # helper module without presets

            for name, entry in mod_presets.items():
                self._register(name, entry, py_file.stem)

    def _register(self, name, entry, module_name):
        try:
            category, description, func = entry
        except (TypeError, ValueError):
            raise ConfigInvalid(f'{module_name}.py: preset {name} needs (category, description, builder)') from None
        if category not in CATEGORIES:
            raise ConfigInvalid(f'{module_name}.py: preset {name} has unknown category {category!r}')
        if not callable(func):
            raise ConfigInvalid(f'{module_name}.py: builder of preset {name} is not callable')
        if name in self._presets:
            raise KeyError(f'Duplicate preset {name} in {module_name}.py and {self._presets[name].module_name}.py')
        self._presets[name] = PresetSpec(name, module_name, category, description, func)

    @property
    def presets(self) -> typing.Iterable[PresetSpec]:
        yield from self._presets.values()

    def by_category(self, category: str) -> typing.List[PresetSpec]:
        return sorted((p for p in self._presets.values() if p.category == category), key=lambda p: p.name)

    def build(self, name: str) -> ScenarioConfig:
        return self._presets[name].build()

    def __getitem__(self, item: str) -> PresetSpec:
        return self._presets[item]

    def __contains__(self, item):
        return item in self._presets

    def __len__(self):
        return len(self._presets)
