from .faa_di_bruno import (
    FaaExpansion,
    FaaTerm,
    bell_number,
    bell_recurrence,
    collapsed_totals,
    compose_derivative,
    count_terms,
    enumerate_terms,
    expansion_table,
    majorized_compose,
    r_patterns,
    univariate_terms,
    weak_compositions,
)

__all__ = [
    'FaaExpansion', 'FaaTerm', 'bell_number', 'bell_recurrence', 'collapsed_totals', 'compose_derivative',
    'count_terms', 'enumerate_terms', 'expansion_table', 'majorized_compose', 'r_patterns', 'univariate_terms',
    'weak_compositions',
]
