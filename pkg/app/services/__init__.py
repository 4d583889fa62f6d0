# Service layer wrapping the solver core for the command-line surface
