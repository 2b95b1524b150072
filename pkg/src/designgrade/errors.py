"""Exception types shared across the package."""


class DesignGradeError(Exception):
    """Base class for every error raised by designgrade."""


class ProgramSyntaxError(DesignGradeError):
    """The submitted text is not a valid Python 3 program."""

    def __init__(self, line, message, path=None):
        self.line = line
        self.message = message
        self.path = path
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line}: {message}")


class DimensionMismatch(DesignGradeError, ValueError):
    pass


class EmptyBatch(DesignGradeError, ValueError):
    pass


class EmptyDataset(DesignGradeError, ValueError):
    pass


class LengthMismatch(DesignGradeError, ValueError):
    pass


class TooFewExamples(DesignGradeError, ValueError):
    pass


class NoGoodPrograms(DesignGradeError):
    pass


class SchemaMismatch(DesignGradeError):
    pass


class MessageTableError(DesignGradeError, ValueError):
    pass


class ArtifactError(DesignGradeError):
    """A model artifact is malformed or was written by an incompatible version."""


class CorpusError(DesignGradeError):
    """Loading a corpus failed; ``problems`` lists every offending entry."""

    def __init__(self, problems):
        self.problems = list(problems)
        lines = "\n".join(f"  - {p}" for p in self.problems)
        super().__init__(f"{len(self.problems)} problem(s) in corpus:\n{lines}")


class ManifestError(CorpusError):
    def __init__(self, message, row=None):
        self.row = row
        self.problems = [self]
        prefix = f"row {row}: " if row is not None else ""
        Exception.__init__(self, prefix + message)


class ScoreOutOfRange(ManifestError):
    def __init__(self, path, score, row=None):
        self.path = path
        self.score = score
        super().__init__(f"{path}: score {score} is outside [0, 1]", row=row)


class SyntaxErrorIn(ManifestError):
    def __init__(self, path, line, message, row=None):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}", row=row)
