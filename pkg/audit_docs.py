
import os
import sys
import yaml
import glob
import re

from plugins.module_utils.commands import ARGUMENT_SPECS

COMPARED = ('type', 'required', 'default', 'choices', 'elements')


def extract_doc_yaml(content):
    match = re.search(r'DOCUMENTATION\s*=\s*r?(\'\'\'|""")(.*?)(\1)', content, re.DOTALL)
    if match:
        return match.group(2)
    return None


def extract_examples(content):
    match = re.search(r'EXAMPLES\s*=\s*r?(\'\'\'|""")(.*?)(\1)', content, re.DOTALL)
    if match:
        return match.group(2)
    return None


def subcommand_of(filepath):
    name = os.path.splitext(os.path.basename(filepath))[0]
    return name[len('gm_'):] if name.startswith('gm_') else None


def compare_option(param, spec, documented):
    errors = []
    for key in COMPARED:
        expected = spec.get(key)
        found = documented.get(key)
        if key == 'required':
            expected, found = bool(expected), bool(found)
        if key == 'type':
            expected, found = expected or 'str', found or 'str'
        if expected != found:
            errors.append(f"Parameter '{param}': {key} is {found!r} in DOCUMENTATION but {expected!r} in argument_spec.")
    if sorted(spec.get('aliases', [])) != sorted(documented.get('aliases', [])):
        errors.append(f"Parameter '{param}': aliases differ between DOCUMENTATION and argument_spec.")
    return errors


def audit_module(filepath):
    print(f"Auditing {filepath}...")
    with open(filepath, 'r') as f:
        content = f.read()

    doc_yaml = extract_doc_yaml(content)
    if not doc_yaml:
        print(f"  [ERROR] No DOCUMENTATION found.")
        return False

    try:
        doc = yaml.safe_load(doc_yaml)
    except yaml.YAMLError as e:
        print(f"  [ERROR] YAML parse error: {e}")
        return False

    subcommand = subcommand_of(filepath)
    if subcommand not in ARGUMENT_SPECS:
        print(f"  [ERROR] No argument_spec for subcommand {subcommand!r}.")
        return False
    arg_spec = ARGUMENT_SPECS[subcommand]

    doc_options = doc.get('options', {})

    errors = []

    for param in arg_spec:
        if param not in doc_options:
            errors.append(f"Parameter '{param}' in argument_spec but MISSING in DOCUMENTATION.")
        else:
            errors.extend(compare_option(param, arg_spec[param], doc_options[param]))

    for param in doc_options:
        if param not in arg_spec:
            errors.append(f"Parameter '{param}' in DOCUMENTATION but MISSING in argument_spec.")

    examples = extract_examples(content)
    if not examples:
        errors.append("No EXAMPLES found.")

    if errors:
        for err in errors:
            print(f"  [FAIL] {err}")
        return False
    else:
        print(f"  [OK]")
        return True


def main():
    modules_dir = 'plugins/modules'
    results = []
    for filepath in sorted(glob.glob(os.path.join(modules_dir, 'gm_*.py'))):
        results.append(audit_module(filepath))
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
