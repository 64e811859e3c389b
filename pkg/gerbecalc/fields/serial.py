import importlib
import logging
from typing import Union
from gerbecalc.fields.forms import FormOracle, global_form_register

try:
    import gerbecalc.wzw.forms  # noqa: F401, registers 'su2.*' forms
    import gerbecalc.wzw.fusion  # noqa: F401
except ModuleNotFoundError as e:
    logging.error("Can not import `gerbecalc.wzw` forms for serialization with '%s'." % e)

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)


def deserialize(form: Union[str, dict, FormOracle]) -> FormOracle:
    r"""Deserialize a form oracle from dictionary including "class_name" and "config" keys. The class name is looked
    up in the global form register, e.g. 'torus.vol' or 'su2.H'. Otherwise, a factory of that name is loaded
    from "module_name".

    Args:
        form (str, dict): Dictionary of the form serialization or registered name.

    Returns:
        FormOracle: Deserialized form.
    """
    if isinstance(form, FormOracle):
        return form
    if isinstance(form, str):
        form = {"class_name": form, "config": {}}
    if not isinstance(form, dict) or "class_name" not in form:
        raise TypeError("Can not deserialize form %s." % form)

    name = form["class_name"]
    config = form["config"] if "config" in form else {}
    if name in global_form_register:
        factory = global_form_register[name]
    elif "module_name" in form:
        try:
            factory = getattr(importlib.import_module(str(form["module_name"])), str(name))
        except (ModuleNotFoundError, AttributeError):
            raise ValueError("Unknown form factory %s in module %s." % (name, form["module_name"]))
    else:
        raise ValueError("Unknown form identifier '%s', registered are %s." % (name, sorted(global_form_register)))
    instance = factory(**config)
    instance.name = name
    instance.config = dict(config)
    return instance


def serialize(form: FormOracle) -> dict:
    return form.get_config()
