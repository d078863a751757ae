#!/usr/bin/env python
"""
Serialization helpers for the command line: complex-number flag parsing,
a deterministic JSON encoder and CSV output through pandas.
"""

import json
import math
import re
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import UsageError

_BARE_UNIT = re.compile(r'(^|[+-])i$')


def parse_complex(text: str) -> complex:
    """Parse "a", "bi", "a+bi" or "a-bi" (no whitespace)."""
    raw = text.strip()
    if not raw or any(ch.isspace() for ch in raw) or raw != text:
        raise UsageError(f"invalid complex number {text!r}")
    candidate = _BARE_UNIT.sub(lambda m: f"{m.group(1)}1i", raw)
    if 'j' in candidate or 'J' in candidate:
        raise UsageError(f"invalid complex number {text!r}")
    try:
        value = complex(candidate.replace('i', 'j'))
    except ValueError:
        raise UsageError(f"invalid complex number {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise UsageError(f"complex number {text!r} is not finite")
    return value


def parse_complex_list(text: str) -> List[complex]:
    if text is None or text.strip() == '':
        return []
    return [parse_complex(part) for part in text.split(',')]


def parse_pole_list(text: str) -> List[Tuple[complex, int]]:
    """Parse "loc:order,loc:order"; a missing order means a simple pole."""
    poles = []
    for part in text.split(','):
        if part == '':
            continue
        location, _, order = part.partition(':')
        try:
            k = int(order) if order else 1
        except ValueError:
            raise UsageError(f"invalid pole order in {part!r}") from None
        if k < 1:
            raise UsageError(f"pole order must be positive in {part!r}")
        poles.append((parse_complex(location), k))
    return poles


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return 'null'
    text = '%.17g' % x
    if text == '-0':
        text = '-0.0'
    elif re.fullmatch(r'-?\d+', text):
        text += '.0'
    return text


def _encode(obj, indent: int, level: int) -> str:
    if obj is None:
        return 'null'
    if isinstance(obj, (bool, np.bool_)):
        return 'true' if obj else 'false'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return _encode({'re': c.real, 'im': c.imag}, indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    pad = ' ' * (indent * (level + 1))
    end = ' ' * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return '{}'
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return '{\n' + ',\n'.join(items) + '\n' + end + '}'
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return '[]'
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return '[\n' + ',\n'.join(items) + '\n' + end + ']'
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj, indent: int = 2) -> str:
    """
    JSON text with 17 significant digits per float, complex numbers as
    {"re", "im"} and infinities as null. Key order is insertion order.
    """
    return _encode(obj, indent, 0) + '\n'


def write_text(text: str, out: Optional[str] = None):
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def write_csv(frame: pd.DataFrame, out: Optional[str] = None):
    """CSV with a header row; floats at 17 significant digits."""
    text = frame.to_csv(index=False, float_format='%.17g', lineterminator='\n')
    write_text(text, out)


def complex_columns(frame: pd.DataFrame, name: str, values: Sequence[complex]) -> pd.DataFrame:
    values = np.asarray(values, dtype=complex)
    frame[f"{name}_re"] = values.real
    frame[f"{name}_im"] = values.imag
    return frame
