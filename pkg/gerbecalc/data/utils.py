import logging
import yaml
import json
import os
import numpy as np
from fractions import Fraction


logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


def _to_serializable(obj):
    """Convert numpy scalars, arrays, complex numbers and fractions into plain json types."""
    if isinstance(obj, dict):
        return {str(key): _to_serializable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_serializable(x) for x in obj]
    if isinstance(obj, np.ndarray):
        return _to_serializable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(np.real(obj)), float(np.imag(obj))]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def save_json_file(obj, file_path: str, sort_keys: bool = True):
    """Save json file. Numpy types, complex numbers and fractions are converted to plain json types.

    Args:
        obj: Python-object to dump.
        file_path (str): File path or name to save 'obj' to.
        sort_keys (bool): Whether to sort dictionary keys. Default is True.

    Returns:
        None.
    """
    with open(file_path, 'w') as json_file:
        json.dump(_to_serializable(obj), json_file, sort_keys=sort_keys, indent=2)


def dump_json_string(obj, sort_keys: bool = True) -> str:
    """Serialize 'obj' into a deterministic json string."""
    return json.dumps(_to_serializable(obj), sort_keys=sort_keys, indent=2)


def load_json_file(file_path: str):
    """Load json file.

    Args:
        file_path (str): File path or name to load.

    Returns:
        obj: Python-object of file.
    """
    with open(file_path, 'r') as json_file:
        file_read = json.load(json_file)
    return file_read


def load_yaml_file(file_path: str):
    """Load yaml file.

    Args:
        file_path (str): File path or name to load.

    Returns:
        obj: Python-object of file.
    """
    with open(file_path, 'r') as stream:
        obj = yaml.safe_load(stream)
    return obj


def save_yaml_file(obj, file_path: str, default_flow_style: bool = False):
    """Save yaml file.

    Args:
        obj: Python-object to dump.
        file_path (str): File path or name to save 'obj' to.
        default_flow_style (bool): Flag for flow style. Default to False.

    Returns:
        None.
    """
    with open(file_path, 'w') as yaml_file:
        yaml.dump(_to_serializable(obj), yaml_file, default_flow_style=default_flow_style)


def load_hyper_file(file_name: str) -> dict:
    """Load a configuration from file. File type can be '.yaml', '.yml' or '.json'.

    Args:
        file_name (str): Path or name of the file containing the configuration.

    Returns:
        hyper (dict): Dictionary of configuration values.
    """
    if "." not in os.path.basename(file_name):
        module_logger.error("Can not determine file-type.")
        return {}
    type_ending = file_name.split(".")[-1]
    if type_ending == "json":
        return load_json_file(file_name)
    elif type_ending in ["yaml", "yml"]:
        return load_yaml_file(file_name)
    else:
        module_logger.error("Unsupported file type %s" % type_ending)
    return {}


def complex_from_pairs(pairs) -> np.ndarray:
    """Convert a list of `[re, im]` pairs into a complex array."""
    pairs = np.array(pairs, dtype="float").reshape((-1, 2))
    return pairs[:, 0] + 1j * pairs[:, 1]


def complex_to_pairs(values) -> list:
    """Convert complex values into a list of `[re, im]` pairs."""
    values = np.asarray(values, dtype="complex").reshape(-1)
    return [[float(np.real(z)), float(np.imag(z))] for z in values]
