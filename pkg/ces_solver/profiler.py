from collections import defaultdict
from logging import getLogger
from time import perf_counter

log = getLogger(__name__)

# progress event -> (edge, span kind); "function" spans time the bare call
# inside a "step", "test" spans a whole check
SPANS = {
    "start_calculation": ("start", "preparation"),
    "prepared_calculation": ("end", "preparation"),
    "start_step": ("start", "step"),
    "end_step": ("end", "step"),
    "start_function": ("start", "function"),
    "end_function": ("end", "function"),
    "start_test": ("start", "test"),
    "end_test": ("end", "test"),
}


class Profiler:
    """
    Progress callback for ``Composer.calculate`` and ``Composer.run_tests``
    that times every graph node and every check.

    ``results()`` gives the preparation time of the last calculation, a
    total/execution/overhead split per node, and the wall time per test.
    """

    def __init__(self):
        self.spans = defaultdict(dict)

    def __call__(self, event_type, details):
        span = SPANS.get(event_type)
        if span is None:
            return
        edge, kind = span
        self.spans[(kind, details.get("name"))][edge] = perf_counter()

    def elapsed(self, kind, name=None) -> float:
        span = self.spans.get((kind, name), {})
        if "start" not in span or "end" not in span:
            return 0.0
        return span["end"] - span["start"]

    def names(self, kind):
        return [name for span_kind, name in self.spans if span_kind == kind]

    def results(self):
        functions = {}
        for name in self.names("step"):
            total = self.elapsed("step", name)
            execution = self.elapsed("function", name)
            functions[name] = dict(total=total, overhead=total - execution, execution=execution)

        tests = {name: self.elapsed("test", name) for name in self.names("test")}
        if tests:
            slowest = max(tests, key=tests.get)
            log.debug("slowest check %s took %.3fs", slowest, tests[slowest])

        return dict(
            preparation=self.elapsed("preparation"),
            functions=functions,
            tests=tests,
        )
