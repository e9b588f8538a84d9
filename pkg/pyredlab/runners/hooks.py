"""Register hooks for the run inside a runner."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

from enum import Enum, unique

from ..errors import SimulationError

#
# Specific Error Definition
#


class HookRegistrationError(SimulationError):
    """A hook was registered twice or removed without being registered."""


#
# Definition of class Hooks
#


class Hooks:
    """Hooks called before, during (after every event) and after a run.

    Every hook is called as ``hook(runner, t)``. Each runner owns one
    Hooks instance, so registrations never leak between runs.
    """

    @unique
    class Types(Enum):
        """Defines the three hook types: pre, mid, post"""
        pre = 1
        mid = 2
        post = 3

    def __init__(self):
        self._hooks = {kind: [] for kind in self.Types}

    def has_hooks(self, kind):
        return bool(self._hooks[kind])

    def register_hook(self, kind, hook):
        """Register a hook.

        Parameters
        ----------
        kind : Hooks.Types member
            Specifies the type of the hook.
        hook : callable
            called with the runner and the current time
        """
        assert kind in self.Types, \
            "please give a type from {}.Types".format(type(self).__qualname__)
        if hook in self._hooks[kind]:
            raise HookRegistrationError(
                "already registered hook: {!r}".format(hook))
        self._hooks[kind].append(hook)

    def unregister_hook(self, kind, hook, error_if_not_registered=True):
        """Remove a hook.

        Raises
        ------
        HookRegistrationError
            when the hook is not registered and error_if_not_registered
        """
        assert kind in self.Types, \
            "please give a type from {}.Types".format(type(self).__qualname__)
        try:
            self._hooks[kind].remove(hook)
        except ValueError:
            if error_if_not_registered:
                raise HookRegistrationError(
                    "hook is not listed as registered, so it cannot be "
                    "unregistered") from None

    def execute_hooks(self, kind, runner, t):
        """call all hooks of one type in registration order"""
        for hook in self._hooks[kind]:
            hook(runner, t)
