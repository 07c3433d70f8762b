from .solver import BRUTE_FORCE_MAX_VARS, OracleResult, OracleStatus, branch_and_bound, brute_force

__all__ = ["BRUTE_FORCE_MAX_VARS", "OracleResult", "OracleStatus", "branch_and_bound", "brute_force"]
