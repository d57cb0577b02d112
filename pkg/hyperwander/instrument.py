import functools
import inspect

from opentelemetry import trace

tracer = trace.get_tracer("hyperwander")


def instrument(
    func=None,
    *,
    span_name=None,
    attributes=None,
    skip_args=None,
    record_args=True,
    on_result=None,
):
    """
    Wrap a reasoning operation in a span.

    `skip_args` keeps large values (knowledge bases, embedding stores, clause
    lists) out of the span attributes; `on_result(span, result)` lets the caller
    annotate the span with outcome figures such as status or model size.
    """

    def decorator(fn):
        name = span_name or f"{fn.__module__}.{fn.__qualname__}"
        static_attrs = attributes or {}
        skipped = set(skip_args or ())
        sig = inspect.signature(fn)

        def _build_arg_attrs(args, kwargs):
            if not record_args:
                return {}

            bound = sig.bind(*args, **kwargs)
            bound.apply_defaults()

            return {
                f"arg.{k}": _safe_attr(v)
                for k, v in bound.arguments.items()
                if k != "self" and k not in skipped
            }

        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            arg_attrs = _build_arg_attrs(args, kwargs)
            with tracer.start_as_current_span(
                name, attributes={**static_attrs, **arg_attrs}
            ) as span:
                try:
                    result = fn(*args, **kwargs)

                except Exception as err:
                    span.set_status(trace.StatusCode.ERROR, str(err))
                    span.record_exception(err)

                    raise

                if on_result is not None and span.is_recording():
                    on_result(span, result)

                return result

        return wrapper

    if func is not None:
        return decorator(func)

    return decorator


def _safe_attr(value, limit=256):
    """coerce value to OTEL-safe attr type (i.e. str, int, float, bool)"""
    if isinstance(value, (str, int, float, bool)):
        return value[:limit] if isinstance(value, str) else value

    if isinstance(value, (set, frozenset)):
        value = sorted(value)

    return str(value)[:limit]
