from dataclasses import Field, MISSING, fields
from typing import Any, Callable, Dict, List, Optional

from voluptuous import (
    Boolean,
    Coerce,
    Invalid,
    Optional as OptionalField,
    Required as RequiredField,
    Schema,
)

# Plain field types map to coercing validators, since config values arrive as text
_COERCIONS: Dict[Any, Callable] = {
    int: Coerce(int),
    float: Coerce(float),
    bool: Boolean(),
    str: str,
}


def get_key_for_field(field: Field):
    if field.default is not MISSING:
        return OptionalField(field.name, default=field.default)
    if field.default_factory is not MISSING:  # type: ignore
        return OptionalField(field.name, default=field.default_factory)  # type: ignore

    return RequiredField(field.name)


def get_schema_for_field(field: Field):
    if "schema_type" in field.metadata:
        return field.metadata["schema_type"]

    return _COERCIONS.get(field.type, field.type)


def get_schema_for_dataclass(cls, allow_fields: Optional[List[str]] = None):
    return Schema(
        {
            get_key_for_field(field): get_schema_for_field(field)
            for field in fields(cls)
            if allow_fields is None or field.name in allow_fields
        }
    )


def comma_list(item_schema: Callable):
    """Validator for ``a, b, c`` text (or an already split sequence)."""

    def validate(value):
        if isinstance(value, str):
            items = [item.strip() for item in value.split(",") if item.strip()]
        elif isinstance(value, (list, tuple)):
            items = list(value)
        else:
            raise Invalid(f"expected a comma-separated list, got {value!r}")
        return [item_schema(item) for item in items]

    return validate
