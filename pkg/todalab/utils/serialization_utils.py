import dataclasses
import hashlib
import json

import numpy as np


def convert_json(obj):
    """ Convert obj to a version which can be serialized with JSON. """
    if is_json_serializable(obj):
        return obj
    else:
        if isinstance(obj, np.ndarray):
            return [convert_json(x) for x in obj.tolist()]

        elif isinstance(obj, np.generic):
            return convert_json(obj.item())

        elif isinstance(obj, complex):
            return {'real': obj.real, 'imag': obj.imag}

        elif dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {convert_json(k): convert_json(v)
                    for k, v in dataclasses.asdict(obj).items()}

        elif isinstance(obj, dict):
            return {convert_json(k): convert_json(v)
                    for k, v in obj.items()}

        elif isinstance(obj, (tuple, list)):
            return [convert_json(x) for x in obj]

        elif hasattr(obj, '__name__') and not ('lambda' in obj.__name__):
            return convert_json(obj.__name__)

        elif hasattr(obj, '__dict__') and obj.__dict__:
            obj_dict = {convert_json(k): convert_json(v)
                        for k, v in obj.__dict__.items()}
            return {str(obj): obj_dict}

        return str(obj)


def is_json_serializable(v):
    try:
        json.dumps(v)
        return True
    except (TypeError, ValueError, OverflowError):
        return False


def config_digest(config) -> str:
    """ sha256 of the canonical JSON form of a config. """
    canonical = json.dumps(convert_json(config), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
