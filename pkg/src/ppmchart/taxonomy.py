"""Operation vocabulary of a modeling session and the default dot coding.

A modeling tool records a fixed set of 26 canvas operations (create / move /
delete / (re)name / reconnect / bend-point edits on start and end events,
activities, XOR and AND gateways, and edges).  This module classifies each
operation name into its element kind and styling category, and supplies the
fixed default color/shade/shape coding used by the chart:

* color encodes the operation family (green = create, blue = move,
  red = delete, orange = (re)name),
* color shade and shape encode the element kind (activity = bright square,
  event = very light circle, gateway = dark diamond, edge = light triangle),
* reconnects and bend-point edits carry their own accent codings
  (light purple triangle, dark grey triangle), edge-label moves a grey
  triangle.

Start/end events share one coding, as do XOR/AND gateways (deliberate symbol
deficit: the two pairs are visually most similar).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = [
    "ClassifyError",
    "DotStyle",
    "ElementKind",
    "OperationCategory",
    "OperationKind",
    "Shape",
    "UnknownOperation",
    "classify",
    "default_style",
    "legend_table",
    "resolve",
    "table_column",
    "PALETTE",
]


class ClassifyError(ValueError):
    """Raised for operation names outside the known 26-name vocabulary."""

    def __init__(self, name: str):
        super().__init__(f"unknown operation name: {name!r}")
        self.name = name


class OperationKind(Enum):
    """The 26 recognized operation names, values are the literal log names."""

    CREATE_START_EVENT = "CREATE_START_EVENT"
    CREATE_END_EVENT = "CREATE_END_EVENT"
    CREATE_ACTIVITY = "CREATE_ACTIVITY"
    CREATE_XOR = "CREATE_XOR"
    CREATE_AND = "CREATE_AND"
    CREATE_EDGE = "CREATE_EDGE"
    MOVE_START_EVENT = "MOVE_START_EVENT"
    MOVE_END_EVENT = "MOVE_END_EVENT"
    MOVE_ACTIVITY = "MOVE_ACTIVITY"
    MOVE_XOR = "MOVE_XOR"
    MOVE_AND = "MOVE_AND"
    MOVE_EDGE_LABEL = "MOVE_EDGE_LABEL"
    RECONNECT_EDGE = "RECONNECT_EDGE"
    DELETE_START_EVENT = "DELETE_START_EVENT"
    DELETE_END_EVENT = "DELETE_END_EVENT"
    DELETE_ACTIVITY = "DELETE_ACTIVITY"
    DELETE_XOR = "DELETE_XOR"
    DELETE_AND = "DELETE_AND"
    DELETE_EDGE = "DELETE_EDGE"
    NAME_ACTIVITY = "NAME_ACTIVITY"
    RENAME_ACTIVITY = "RENAME_ACTIVITY"
    NAME_EDGE = "NAME_EDGE"
    RENAME_EDGE = "RENAME_EDGE"
    CREATE_EDGE_BENDPOINT = "CREATE_EDGE_BENDPOINT"
    MOVE_EDGE_BENDPOINT = "MOVE_EDGE_BENDPOINT"
    DELETE_EDGE_BENDPOINT = "DELETE_EDGE_BENDPOINT"


@dataclass(frozen=True)
class UnknownOperation:
    """Forward-compatibility wrapper for operation names outside the vocabulary."""

    name: str


class ElementKind(Enum):
    START_EVENT = "start-event"
    END_EVENT = "end-event"
    ACTIVITY = "activity"
    XOR_GATEWAY = "xor-gateway"
    AND_GATEWAY = "and-gateway"
    EDGE = "edge"


class OperationCategory(Enum):
    """Styling category: the four base families plus the two accent codings."""

    CREATE = "create"
    MOVE = "move"
    DELETE = "delete"
    RENAME = "rename"
    RECONNECT = "reconnect"
    BENDPOINT = "bendpoint"


class Shape(Enum):
    SQUARE = "square"
    CIRCLE = "circle"
    DIAMOND = "diamond"
    TRIANGLE = "triangle"


RGB = "tuple[int, int, int]"


@dataclass(frozen=True)
class DotStyle:
    """Concrete rendering style for one dot: an RGB color and a glyph shape."""

    color: tuple[int, int, int]
    shape: Shape

    def __post_init__(self) -> None:
        if len(self.color) != 3 or not all(0 <= c <= 255 for c in self.color):
            raise ValueError(f"color must be an RGB triple of 0..255, got {self.color!r}")

    @property
    def hex(self) -> str:
        r, g, b = self.color
        return f"#{r:02x}{g:02x}{b:02x}"


# Frozen palette.  Shade families (dark/bright/light/very-light) sit at HSL
# lightness 0.18/0.44/0.70/0.96 with saturation 0.85, so any two shades of one
# hue differ by >= 0.25 in lightness even after 8-bit quantization; accents
# are outside the shade families.
PALETTE: dict[str, tuple[int, int, int]] = {
    "dark_green": (7, 85, 7),
    "bright_green": (17, 208, 17),
    "light_green": (113, 244, 113),
    "very_light_green": (236, 253, 236),
    "dark_blue": (7, 26, 85),
    "bright_blue": (17, 65, 208),
    "light_blue": (113, 146, 244),
    "very_light_blue": (236, 240, 253),
    "dark_red": (85, 7, 7),
    "bright_red": (208, 17, 17),
    "light_red": (244, 113, 113),
    "very_light_red": (253, 236, 236),
    "orange": (255, 128, 0),
    "light_purple": (204, 153, 230),
    "grey": (128, 128, 128),
    "dark_grey": (64, 64, 64),
}


_K = OperationKind
_E = ElementKind
_C = OperationCategory

# kind -> (element kind, styling category)
_CLASSIFICATION: dict[OperationKind, tuple[ElementKind, OperationCategory]] = {
    _K.CREATE_START_EVENT: (_E.START_EVENT, _C.CREATE),
    _K.CREATE_END_EVENT: (_E.END_EVENT, _C.CREATE),
    _K.CREATE_ACTIVITY: (_E.ACTIVITY, _C.CREATE),
    _K.CREATE_XOR: (_E.XOR_GATEWAY, _C.CREATE),
    _K.CREATE_AND: (_E.AND_GATEWAY, _C.CREATE),
    _K.CREATE_EDGE: (_E.EDGE, _C.CREATE),
    _K.MOVE_START_EVENT: (_E.START_EVENT, _C.MOVE),
    _K.MOVE_END_EVENT: (_E.END_EVENT, _C.MOVE),
    _K.MOVE_ACTIVITY: (_E.ACTIVITY, _C.MOVE),
    _K.MOVE_XOR: (_E.XOR_GATEWAY, _C.MOVE),
    _K.MOVE_AND: (_E.AND_GATEWAY, _C.MOVE),
    _K.MOVE_EDGE_LABEL: (_E.EDGE, _C.MOVE),
    _K.RECONNECT_EDGE: (_E.EDGE, _C.RECONNECT),
    _K.DELETE_START_EVENT: (_E.START_EVENT, _C.DELETE),
    _K.DELETE_END_EVENT: (_E.END_EVENT, _C.DELETE),
    _K.DELETE_ACTIVITY: (_E.ACTIVITY, _C.DELETE),
    _K.DELETE_XOR: (_E.XOR_GATEWAY, _C.DELETE),
    _K.DELETE_AND: (_E.AND_GATEWAY, _C.DELETE),
    _K.DELETE_EDGE: (_E.EDGE, _C.DELETE),
    _K.NAME_ACTIVITY: (_E.ACTIVITY, _C.RENAME),
    _K.RENAME_ACTIVITY: (_E.ACTIVITY, _C.RENAME),
    _K.NAME_EDGE: (_E.EDGE, _C.RENAME),
    _K.RENAME_EDGE: (_E.EDGE, _C.RENAME),
    _K.CREATE_EDGE_BENDPOINT: (_E.EDGE, _C.BENDPOINT),
    _K.MOVE_EDGE_BENDPOINT: (_E.EDGE, _C.BENDPOINT),
    _K.DELETE_EDGE_BENDPOINT: (_E.EDGE, _C.BENDPOINT),
}

# The vocabulary's four-column table grouping (6 create, 7 move, 6 delete,
# 7 other).  Differs from the styling category: reconnect sits in the move
# column, renames and bend-point edits in the other column.
_TABLE_COLUMN: dict[OperationKind, str] = {
    **{k: "create" for k, (_, c) in _CLASSIFICATION.items() if c is _C.CREATE},
    **{k: "move" for k, (_, c) in _CLASSIFICATION.items() if c is _C.MOVE},
    **{k: "delete" for k, (_, c) in _CLASSIFICATION.items() if c is _C.DELETE},
    **{k: "other" for k, (_, c) in _CLASSIFICATION.items() if c in (_C.RENAME, _C.BENDPOINT)},
    _K.RECONNECT_EDGE: "move",
}

# Shade per element kind within the create/move/delete families.
_SHADE_BY_ELEMENT: dict[ElementKind, str] = {
    _E.START_EVENT: "very_light",
    _E.END_EVENT: "very_light",
    _E.ACTIVITY: "bright",
    _E.XOR_GATEWAY: "dark",
    _E.AND_GATEWAY: "dark",
    _E.EDGE: "light",
}

_HUE_BY_CATEGORY: dict[OperationCategory, str] = {
    _C.CREATE: "green",
    _C.MOVE: "blue",
    _C.DELETE: "red",
}

_SHAPE_BY_ELEMENT: dict[ElementKind, Shape] = {
    _E.START_EVENT: Shape.CIRCLE,
    _E.END_EVENT: Shape.CIRCLE,
    _E.ACTIVITY: Shape.SQUARE,
    _E.XOR_GATEWAY: Shape.DIAMOND,
    _E.AND_GATEWAY: Shape.DIAMOND,
    _E.EDGE: Shape.TRIANGLE,
}


def resolve(name: str) -> OperationKind | UnknownOperation:
    """Total lookup: a known OperationKind, or an UnknownOperation wrapper."""
    try:
        return OperationKind(name)
    except ValueError:
        return UnknownOperation(name)


def classify(name: str) -> tuple[OperationKind, ElementKind, OperationCategory]:
    """Map an operation name to (kind, element kind, styling category).

    Raises ClassifyError for names outside the 26-name vocabulary; callers
    choose whether that is fatal (strict) or means dropping the event with a
    warning (lenient).
    """
    kind = resolve(name)
    if isinstance(kind, UnknownOperation):
        raise ClassifyError(name)
    element, category = _CLASSIFICATION[kind]
    return kind, element, category


def element_kind_of(kind: OperationKind) -> ElementKind:
    return _CLASSIFICATION[kind][0]


def category_of(kind: OperationKind) -> OperationCategory:
    return _CLASSIFICATION[kind][1]


def table_column(kind: OperationKind) -> str:
    """Vocabulary table column ('create' | 'move' | 'delete' | 'other')."""
    return _TABLE_COLUMN[kind]


def default_style(kind: OperationKind | UnknownOperation) -> DotStyle:
    """The fixed default color (shade) and shape coding for one operation.

    Unknown operations are never silently styled.
    """
    if isinstance(kind, UnknownOperation):
        raise ClassifyError(kind.name)
    element, category = _CLASSIFICATION[kind]
    shape = _SHAPE_BY_ELEMENT[element]
    if category in _HUE_BY_CATEGORY:
        color = PALETTE[f"{_SHADE_BY_ELEMENT[element]}_{_HUE_BY_CATEGORY[category]}"]
    elif category is _C.RENAME:
        color = PALETTE["orange"]
    elif category is _C.RECONNECT:
        color = PALETTE["light_purple"]
    else:  # bend-point edits
        color = PALETTE["dark_grey"]
    if kind is _K.MOVE_EDGE_LABEL:
        color = PALETTE["grey"]
    return DotStyle(color=color, shape=shape)


def legend_table() -> list[dict[str, object]]:
    """Machine-readable style table, one row per operation kind.

    Shared by the docs, the CLI and the UI legend/settings panel so all
    surfaces render the same coding.
    """
    rows = []
    for kind in OperationKind:
        element, category = _CLASSIFICATION[kind]
        style = default_style(kind)
        rows.append(
            {
                "name": kind.value,
                "element": element.value,
                "category": category.value,
                "table_column": _TABLE_COLUMN[kind],
                "shape": style.shape.value,
                "rgb": list(style.color),
                "hex": style.hex,
            }
        )
    return rows
