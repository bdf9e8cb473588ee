from hvi.dto import Command, RunConfig


def create_RunConfig(command: Command, **kwargs) -> RunConfig:
    return RunConfig(command=command, **kwargs)
