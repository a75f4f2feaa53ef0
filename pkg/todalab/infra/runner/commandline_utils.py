import argparse
import inspect

import docstring_parser


def get_argparser_from_func(func, parser=None, exclude=None):
    """ Read the arguments of a function and expose them on an ArgumentParser.

    Parameters without a default become positional arguments, the rest become options
    whose help text is taken from the function docstring.
    """
    if parser is None:
        parser = argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    signature = inspect.signature(func)
    docstring = docstring_parser.parse(inspect.getdoc(func) or '')

    # transform docstring.params to dictionary
    params = {p.arg_name: p.description for p in docstring.params}

    exclude = list(exclude) if exclude is not None else []
    exclude.extend(['self', 'cls', 'args', 'kwargs'])

    for k, v in signature.parameters.items():
        if k in exclude:
            continue
        help_str = params.get(k, ' ')
        if v.default is inspect.Parameter.empty:
            arg_type = v.annotation if v.annotation is not inspect.Parameter.empty else str
            parser.add_argument(k, type=arg_type, help=help_str)
        elif isinstance(v.default, bool):
            action = 'store_false' if v.default else 'store_true'
            parser.add_argument('--' + k, action=action, help=help_str)
        else:
            if v.default is not None:
                arg_type = type(v.default)
            elif v.annotation is not inspect.Parameter.empty:
                # get from annotation
                arg_type = v.annotation
            else:
                raise ValueError(
                    f'Argument with default value None must be annotated with type in {func}, {k}, {v.annotation}')
            parser.add_argument('--' + k, type=arg_type, default=v.default, help=help_str)
    return parser


def add_subcommand(subparsers, name, func):
    """ Register ``func`` as subcommand ``name``; the parsed namespace carries it as ``_func``. """
    docstring = docstring_parser.parse(inspect.getdoc(func) or '')
    parser = subparsers.add_parser(name, help=docstring.short_description,
                                   formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    get_argparser_from_func(func, parser=parser)
    parser.set_defaults(_func=func)
    return parser
