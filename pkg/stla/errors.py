# STLA -- small-time local attainability toolkit
# Copyright (C) 2014 STLA contributors.  See AUTHORS.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Base failure classes.

Every error the library raises on purpose derives from BaseStlaFail so
the command line layer can turn it into a message and an exit code
without a traceback.  The concrete errors live next to the code that
raises them (exprcore, sysmodel, spectral, trajsim, ...).
"""


class BaseStlaFail(Exception):
    """
    Base exception that all other stla failures should subclass from.

    Subclasses provide a general_message and an exit_code; anything
    specific to one occurrence goes into the keyword metadata.
    """
    general_message = u'Analysis failed.'
    exit_code = 1

    @property
    def exception_path(self):
        return u"%s:%s" % (
            self.__class__.__module__, self.__class__.__name__)

    def __init__(self, message=None, **metadata):
        self.message = message or self.general_message
        self.metadata = metadata or {}
        Exception.__init__(self, self.message)

    def __str__(self):
        return self.message


class InputError(BaseStlaFail):
    """
    Something was wrong with what the user handed us: an expression,
    an input document, a control, a flag.
    """
    general_message = u'Invalid input.'
    exit_code = 1


class EvaluationError(BaseStlaFail):
    """
    Numerical evaluation could not proceed.
    """
    general_message = u'Evaluation failed.'
    exit_code = 2


class ConfigError(InputError):
    general_message = u'Invalid configuration.'
