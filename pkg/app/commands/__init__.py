# Command groups for the solver CLI

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INSTANCE = 2
EXIT_NON_CONSERVATIVE = 3
EXIT_INFEASIBLE_PARAMS = 4
