"""Wire serialization: JSON, JSONP, XML and YAML views of the same data.

The XML mapping is deterministic and self-typed so any body can be decoded
back to the exact data the JSON body carries:

* the root element is ``<response>``
* a dict renders as child elements named by its keys
* a list renders as a container with ``type="list"``; children of the
  four record containers are named by the singular resource, anything
  else uses ``<item>``
* scalars carry ``type`` attributes (int, float, str, bool, null) with
  ``str(value)`` text; null elements are empty

Callback names for JSONP must look like a JavaScript identifier.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET

import yaml

from chemserve.errors import InvalidParameter

FORMATS = ("json", "jsonp", "xml", "yaml")

MEDIA_TYPES = {
    "json": "application/json",
    "jsonp": "application/javascript",
    "xml": "application/xml",
    "yaml": "application/yaml",
}

_SINGULAR = {
    "molecules": "molecule",
    "targets": "target",
    "activities": "activity",
    "mechanisms": "mechanism",
}

_CALLBACK_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$]*$")


def plural(resource: str) -> str:
    for plural_name, singular in _SINGULAR.items():
        if singular == resource:
            return plural_name
    return resource + "s"


def to_json(data) -> bytes:
    return json.dumps(data).encode("utf-8")


def to_jsonp(data, callback: str) -> bytes:
    if not _CALLBACK_RE.match(callback or ""):
        raise InvalidParameter(f"callback must be an identifier, got {callback!r}")
    return b"%s(%s);" % (callback.encode("ascii"), to_json(data))


def to_yaml(data) -> bytes:
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True).encode("utf-8")


def _attach(parent: ET.Element, key: str, value) -> None:
    child = ET.SubElement(parent, key)
    _fill(child, key, value)


def _fill(element: ET.Element, key: str, value) -> None:
    if value is None:
        element.set("type", "null")
    elif isinstance(value, bool):
        element.set("type", "bool")
        element.text = "true" if value else "false"
    elif isinstance(value, int):
        element.set("type", "int")
        element.text = str(value)
    elif isinstance(value, float):
        element.set("type", "float")
        element.text = repr(value)
    elif isinstance(value, str):
        element.set("type", "str")
        element.text = value
    elif isinstance(value, dict):
        for k, v in value.items():
            _attach(element, k, v)
    elif isinstance(value, (list, tuple)):
        element.set("type", "list")
        item_name = _SINGULAR.get(key, "item")
        for v in value:
            item = ET.SubElement(element, item_name)
            _fill(item, item_name, v)
    else:
        raise TypeError(f"cannot serialize {type(value).__name__} to XML")


def to_xml(data: dict) -> bytes:
    root = ET.Element("response")
    _fill(root, "response", data)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def from_xml(body: bytes):
    """Decode the mapping above; inverse of to_xml."""
    return _read(ET.fromstring(body))


def _read(element: ET.Element):
    kind = element.get("type")
    if kind == "null":
        return None
    if kind == "bool":
        return element.text == "true"
    if kind == "int":
        return int(element.text)
    if kind == "float":
        return float(element.text)
    if kind == "str":
        return element.text or ""
    if kind == "list":
        return [_read(child) for child in element]
    return {child.tag: _read(child) for child in element}


def render(data: dict, fmt: str, callback: str | None = None) -> tuple[bytes, str]:
    """Serialize to (body, media type) in the requested format."""
    if fmt == "json":
        return to_json(data), MEDIA_TYPES["json"]
    if fmt == "jsonp":
        return to_jsonp(data, callback or ""), MEDIA_TYPES["jsonp"]
    if fmt == "xml":
        return to_xml(data), MEDIA_TYPES["xml"]
    if fmt == "yaml":
        return to_yaml(data), MEDIA_TYPES["yaml"]
    raise InvalidParameter(f"unknown format {fmt!r}; supported: {', '.join(FORMATS)}")
