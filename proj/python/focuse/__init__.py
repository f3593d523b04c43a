"""Timed and event streams, causality checks, components and networks."""

from ._errors import FocuseError, ParseError
from ._core import (
    Component,
    EventStream,
    Message,
    Network,
    Property,
    TimedStream,
    Trace,
    causality_index_map,
    check,
    ci,
    embed,
    parse_component,
    parse_event_stream,
    parse_network,
    parse_properties,
    parse_property,
    parse_stream,
    print_stream,
    read_trace,
    run,
    simulate,
    ti,
    to_event,
)

__all__ = [
    "Component",
    "EventStream",
    "FocuseError",
    "Message",
    "Network",
    "ParseError",
    "Property",
    "TimedStream",
    "Trace",
    "causality_index_map",
    "check",
    "ci",
    "embed",
    "parse_component",
    "parse_event_stream",
    "parse_network",
    "parse_properties",
    "parse_property",
    "parse_stream",
    "print_stream",
    "read_trace",
    "run",
    "simulate",
    "ti",
    "to_event",
]
