import sys
from collections import Counter
from inspect import Parameter, signature
from logging import getLogger

import networkx as nx
from littleutils import ensure_list_if_string

log = getLogger(__name__)


def bound_argument_names(function, predecessor_results):
    """
    The parameters of ``function`` that will be fed from the graph. Parameters
    with defaults are only fed when something upstream provides them.
    """
    names = []
    for key, parameter in signature(function).parameters.items():
        if parameter.kind in (parameter.VAR_POSITIONAL, parameter.VAR_KEYWORD):
            raise Exception(
                f"Variable arguments ('{key}') are not supported in graph functions."
            )
        if parameter.default is not Parameter.empty and key not in predecessor_results:
            continue
        names.append(key)
    return names


def calculate_collect_exceptions(
    composer,
    outputs,
    perform_checks=True,
    intermediates=False,
    progress_callback=None,
    raise_immediately=False,
):
    """
    Executes the required parts of the function graph to produce results
    for the given outputs.

    Args:
        composer: The composer to calculate
        outputs: list of the names of the functions to calculate
        perform_checks: if true error checks are performed before calculation
        intermediates: if true the results of all functions calculated will be returned
        progress_callback: a callback that is called as the calculation progresses,\
                of the form `callback(event_type, details)`

    Returns:
        Tuple: (results, exception_info). results is a dictionary keyed by
               function name, exception_info is (etype, evalue, etraceback, node)
               if a function raised, otherwise None.
    """
    outputs = ensure_list_if_string(outputs)
    progress_callback = progress_callback or (lambda *args, **kwargs: None)
    progress_callback("start_calculation", dict(outputs=outputs))

    if perform_checks:
        try:
            for name in outputs:
                if name not in composer._functions:
                    raise Exception(
                        f"'{name}' is not a composed function in this {composer.__class__.__name__} object."
                    )

            for error in composer.check(outputs):
                raise Exception(error["message"])
        except Exception:
            if raise_immediately:
                raise
            etype, evalue, etraceback = sys.exc_info()
            return {}, (etype, evalue, etraceback, None)

    dag = composer.ancestor_dag(outputs)
    if intermediates:
        outputs = list(dag.nodes())

    execution_order = list(nx.topological_sort(dag))
    log.debug("Execution order %s", execution_order)

    results = {}
    # Number of times a function's result still needs to be read
    remaining_usage_counts = Counter(pred for pred, _ in dag.edges())
    progress_callback(
        "prepared_calculation",
        dict(execution_order=execution_order, execution_graph=dag),
    )

    for node in execution_order:
        progress_callback("start_step", dict(name=node))
        try:
            predecessors = list(composer._resolve_predecessors(node))
            function = composer._functions[node]
            predecessor_results = {
                parameter: results[pred] for parameter, pred in predecessors
            }
            arguments = {
                name: predecessor_results[name]
                for name in bound_argument_names(function, predecessor_results)
            }

            try:
                progress_callback("start_function", dict(name=node))
                results[node] = function(**arguments)
            except Exception:
                if raise_immediately:
                    raise
                etype, evalue, etraceback = sys.exc_info()
                log.debug("Function '%s' raised %s", node, evalue)
                return results, (etype, evalue, etraceback, node)
            finally:
                progress_callback("end_function", dict(name=node))

            remaining_usage_counts.subtract([pred for _, pred in predecessors])
            ready_to_eject = [
                key
                for key, value in remaining_usage_counts.items()
                if value == 0 and key not in outputs
            ]
            for key in ready_to_eject:
                remaining_usage_counts.pop(key)
                results.pop(key, None)
        finally:
            progress_callback("end_step", dict(name=node, result=results.get(node)))

    return results, None


def calculate(*args, **kwargs):
    """
    Same as `calculate_collect_exceptions` but raises the first exception
    instead of returning it.

    Returns:
        Dictionary: Dictionary of results keyed by function name
    """
    results, _ = calculate_collect_exceptions(*args, raise_immediately=True, **kwargs)
    return results
