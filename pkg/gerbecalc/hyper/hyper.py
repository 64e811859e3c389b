import os
import logging
from typing import Union
from copy import deepcopy
from gerbecalc.data.utils import load_hyper_file, save_yaml_file

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.realpath(__file__)), "defaults.yaml")


class HyperParameter:
    r"""A class to store numerical tolerances, step sizes and sampling defaults, exposing them for the command line
    interface and batch jobs. The shipped defaults in `defaults.yaml` are always loaded first and a user config
    (dictionary or path to a '.yaml'/'.json' file) is merged on top of them, section by section.

    .. code-block:: python

        from gerbecalc.hyper.hyper import HyperParameter
        hyper = HyperParameter({"validation": {"tolerance": 1e-5}})
        print(hyper["validation"]["tolerance"], hyper["quadrature"]["degree"])
    """

    def __init__(self, hyper_info: Union[str, dict] = None, defaults: Union[str, dict] = DEFAULT_CONFIG_PATH):
        """Make a config instance from a user dictionary or path to a config file.

        Args:
            hyper_info (str, dict): Config dictionary or path to file. Default is None.
            defaults (str, dict): Default config or path to it. Default is the shipped `defaults.yaml`.
        """
        self._hyper = deepcopy(defaults) if isinstance(defaults, dict) else load_hyper_file(defaults)
        if hyper_info is None:
            user = {}
        elif isinstance(hyper_info, str):
            user = load_hyper_file(hyper_info)
        elif isinstance(hyper_info, dict):
            user = deepcopy(hyper_info)
        else:
            raise TypeError("`HyperParameter` requires valid config dictionary or path to file.")

        for section, values in user.items():
            if isinstance(values, dict) and isinstance(self._hyper.get(section), dict):
                self._hyper[section].update(values)
            else:
                self._hyper[section] = values

        self.verify()

    def verify(self):
        """Logic to verify and optionally update the config dictionary."""
        for section in ["quadrature", "transport", "exterior", "mesh", "validation", "holonomy", "random"]:
            if section not in self._hyper:
                module_logger.info("Adding empty '%s' category to config." % section)
                self._hyper[section] = {}
        if "seed" not in self._hyper["random"]:
            module_logger.info("Adding 'seed' to 'random' category in config.")
            self._hyper["random"]["seed"] = 0
        if "samples" not in self._hyper["validation"]:
            module_logger.info("Adding 'samples' to 'validation' category in config.")
            self._hyper["validation"]["samples"] = 200
        if self._hyper["quadrature"].get("degree", 4) not in [1, 2, 4, 5]:
            raise ValueError("Unsupported quadrature degree %s." % self._hyper["quadrature"]["degree"])

        # Every tolerance and step must be strictly positive.
        for section, values in self._hyper.items():
            if not isinstance(values, dict):
                continue
            for key, value in values.items():
                if key.endswith("tolerance") or key.endswith("step"):
                    if not isinstance(value, (int, float)) or value <= 0:
                        raise ValueError("Config value '%s.%s' must be positive, got %s." % (section, key, value))

    def __getitem__(self, item):
        return deepcopy(self._hyper[item])

    def get(self, section: str, key: str, default=None):
        """Return a single value of a section or `default`."""
        return deepcopy(self._hyper.get(section, {}).get(key, default))

    def set_tolerance(self, tol: float):
        """Override the validator and spread tolerances with one value, as done by the `--tol` flag."""
        if tol is None:
            return self
        if tol <= 0:
            raise ValueError("Tolerance must be positive, got %s." % tol)
        self._hyper["validation"]["tolerance"] = float(tol)
        self._hyper["holonomy"]["spread_tolerance"] = float(tol)
        return self

    def to_dict(self) -> dict:
        return deepcopy(self._hyper)

    def save(self, file_path: str):
        """Write the merged config to a yaml file."""
        save_yaml_file(self._hyper, file_path)
