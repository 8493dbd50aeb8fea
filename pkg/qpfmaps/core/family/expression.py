"""Closed form expressions used by custom families.

From this module, you only need to use parse_expression.
For instance::

    expr = parse_expression("arctan(alpha*x) - beta*(1+cos(2*pi*theta))")
    expr.evaluate({"alpha": 100, "x": 0.1, "beta": 0.5, "theta": 0.25})

Expressions are evaluated with numpy, so every variable can be bound to
an array and the result is broadcast accordingly.
"""
# Standard imports
import math

# Custom imports
import numpy as np
import textx
from pkg_resources import resource_string

from qpfmaps.core.errors import ExpressionSyntaxError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "arctan": np.arctan,
    "exp": np.exp,
    "log": np.log,
}

# Names every expression may use, bound at evaluation time
VARIABLES = ("theta", "x", "beta", "alpha", "omega")
CONSTANTS = {"pi": math.pi}


def model_class(name: str, bases: tuple, attrs: dict) -> type:
    """Metaclass to automatically build the __init__ to get the properties,
    and register the class for metamodel
    """
    if "__init__" not in attrs:

        def __init__(self, *args, **kwargs):
            for field, value in kwargs.items():
                setattr(self, field, value)

        attrs["__init__"] = __init__
    cls = type(name, bases, attrs)
    model_class.classes.append(cls)
    return cls


model_class.classes = []


# ============ Different class to map with the expression model


class Expression(metaclass=model_class):
    def evaluate(self, env):
        return self.root.evaluate(env)

    def names(self):
        return self.root.names()


class Sum(metaclass=model_class):
    def evaluate(self, env):
        out = self.terms[0].evaluate(env)
        for op, term in zip(self.ops, self.terms[1:]):
            value = term.evaluate(env)
            out = out + value if op == "+" else out - value
        return out

    def names(self):
        return set().union(*(term.names() for term in self.terms))


class Product(metaclass=model_class):
    def evaluate(self, env):
        out = self.factors[0].evaluate(env)
        for op, factor in zip(self.ops, self.factors[1:]):
            value = factor.evaluate(env)
            out = out * value if op == "*" else out / value
        return out

    def names(self):
        return set().union(*(factor.names() for factor in self.factors))


class Unary(metaclass=model_class):
    def evaluate(self, env):
        value = self.value.evaluate(env)
        return -value if self.sign == "-" else value

    def names(self):
        return self.value.names()


class Power(metaclass=model_class):
    def evaluate(self, env):
        base = self.base.evaluate(env)
        if self.exponent is None:
            return base
        return np.power(base, self.exponent.evaluate(env))

    def names(self):
        names = self.base.names()
        if self.exponent is not None:
            names = names | self.exponent.names()
        return names


class Call(metaclass=model_class):
    def evaluate(self, env):
        return FUNCTIONS[self.func](self.arg.evaluate(env))

    def names(self):
        return self.arg.names()


class Constant(metaclass=model_class):
    def evaluate(self, env):
        return float(self.value)

    def names(self):
        return set()


class Variable(metaclass=model_class):
    def evaluate(self, env):
        if self.name in CONSTANTS:
            return CONSTANTS[self.name]
        return env[self.name]

    def names(self):
        return set() if self.name in CONSTANTS else {self.name}


class Group(metaclass=model_class):
    def evaluate(self, env):
        return self.expr.evaluate(env)

    def names(self):
        return self.expr.names()


METAMODEL = textx.metamodel_from_str(
    resource_string(__name__, "expression.tx").decode(),  # grammar from expression.tx
    classes=model_class.classes,
    debug=False,
)


def parse_expression(raw: str, parameters=()) -> Expression:
    """Parse an expression and check that it only uses known names

    Args:
        raw (str): expression such as ``"arctan(alpha*x) - 2*beta"``
        parameters (iterable): extra names allowed besides theta, x, beta,
            alpha, omega and pi

    Raises:
        ExpressionSyntaxError: on a grammar error or an unknown name
    """
    try:
        model = METAMODEL.model_from_str(raw)
    except textx.exceptions.TextXSyntaxError as err:
        raise ExpressionSyntaxError(err.message, err.col)

    allowed = set(VARIABLES) | set(parameters)
    unknown = model.names() - allowed
    if unknown:
        raise ExpressionSyntaxError(
            "unknown name(s) %s in '%s'" % (", ".join(sorted(unknown)), raw)
        )
    return model
