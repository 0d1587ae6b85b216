from .critical_flow import (
    FlowConfig,
    FlowResult,
    FlowScheme,
    FlowState,
    FlowStatus,
    analyticity_diagnostics,
    flow_step,
    initial_state,
    normalize_length,
    renormalize,
    residual,
    run_flow,
)

__all__ = [
    'FlowConfig', 'FlowResult', 'FlowScheme', 'FlowState', 'FlowStatus', 'analyticity_diagnostics', 'flow_step',
    'initial_state', 'normalize_length', 'renormalize', 'residual', 'run_flow',
]
