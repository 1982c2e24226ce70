"""Named error types.

Every failure mode in the library raises exactly one of these, so callers
(and the CLI) can report a stable error name: ``err.name`` is the class name.
"""


class TokpressError(Exception):
    """Base class for all tokpress errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


# -- configuration validation ------------------------------------------------

class InvalidCount(TokpressError):
    """A count field (frames, budget, resolution, ...) is zero or negative."""


class ResolutionNotDivisible(TokpressError):
    """Encoder resolution is not a multiple of the patch size."""


class TokensPerImageMismatch(TokpressError):
    """tokens_per_image disagrees with (resolution / patch_size)^2."""


class OddThumbFrames(TokpressError):
    """The thumbnail frame count must be even."""


class ThumbFramesExceedTotal(TokpressError):
    """More thumbnail frames requested than input frames."""


class BudgetTooSmall(TokpressError):
    """Token budget leaves no room for sampled tokens."""


class LayoutTooSmall(TokpressError):
    """Grid layout has fewer cells than thumbnail frames."""


class InvalidPooling(TokpressError):
    """Pooling kernel or stride below 1."""


# -- selection / transforms --------------------------------------------------

class InvalidSelection(TokpressError):
    """Uniform selection asked for zero items or more items than exist."""


class TooManyFrames(TokpressError):
    """More frames than cells in the thumbnail layout."""


class NotSquareGrid(TokpressError):
    """2-D pooling needs a per-frame token count that is a perfect square."""


class NotDivisible(TokpressError):
    """Frame count is not divisible by the group size."""


class DimMismatch(TokpressError):
    """Token tensors disagree on dimensionality."""


class WrongResolution(TokpressError):
    """Frame size does not match the encoder resolution."""


class ShapeMismatch(TokpressError):
    """Feature file dimensions disagree with the tower spec."""


class FramesRequired(TokpressError):
    """Strategy needs pixel frames but only encoded features were given."""


# -- pack I/O ------------------------------------------------------------

class IoError(TokpressError):
    """Underlying file read/write failed."""


class FormatError(TokpressError):
    """Pack bytes are malformed or internally inconsistent."""


class BadMagic(TokpressError):
    """File does not start with the pack magic."""


class UnsupportedVersion(TokpressError):
    """Pack container version not understood by this reader."""
