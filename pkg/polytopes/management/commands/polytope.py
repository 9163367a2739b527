import json
import logging

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from groups.exceptions import ConsistencyError, PolytopeError, ResourceLimitError
from polytopes.service import PolytopeService

EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_CONSISTENCY = 4


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}")


class Command(BaseCommand):
    help = "Verify chiral and directly regular polytopes given by rotation presentations"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="subcommand", required=True)

        check = subparsers.add_parser("check", help="classify the system of a presentation file")
        check.add_argument("file")

        mix = subparsers.add_parser("mix", help="classify the mix of two presentation files")
        mix.add_argument("file_a")
        mix.add_argument("file_b")

        catalog = subparsers.add_parser("catalog", help="build and classify a named construction")
        catalog.add_argument("name")
        catalog.add_argument("params", nargs="*", type=int)

        search = subparsers.add_parser("search", help="list generating tuples of a group")
        search.add_argument("group")
        search.add_argument("params", nargs="*", type=int)
        search.add_argument("--type", dest="type_vector", required=True, help="orders, e.g. 3,5,3")
        search.add_argument("--limit", type=int, default=None)

        for sub in (check, mix, catalog, search):
            sub.add_argument("--json", action="store_true", dest="as_json", help="print the JSON report")
            sub.add_argument("--max-cosets", type=int, default=None)
            sub.add_argument("--faces", action="store_true", help="also build the face lattice")
            sub.add_argument("--witness-length", type=int, default=0, help="search words up to this length for a period witness")

    def _configure_logging(self, verbosity):
        if verbosity >= 2:
            level = logging.DEBUG if verbosity >= 3 else logging.INFO
            for name in ("groups", "polytopes"):
                logging.getLogger(name).setLevel(level)

    def handle(self, *args, **options):
        verbosity = options["verbosity"]
        self._configure_logging(verbosity)
        subcommand = options["subcommand"]
        try:
            if options["max_cosets"] is not None and options["max_cosets"] < 1:
                raise ValueError(f"--max-cosets must be positive, got {options['max_cosets']}")
            service = PolytopeService(
                max_cosets=options["max_cosets"],
                faces=options["faces"],
                witness_length=options["witness_length"],
                progress=verbosity >= 2,
            )
            if subcommand == "check":
                data = service.check(options["file"])
            elif subcommand == "mix":
                data = service.mix(options["file_a"], options["file_b"])
            elif subcommand == "catalog":
                data = service.catalog(options["name"], options["params"])
            else:
                data = service.search(
                    options["group"],
                    options["params"],
                    _int_list(options["type_vector"]),
                    options["limit"],
                )
        except ResourceLimitError as e:
            raise CommandError(f"resource limit: {e} {json.dumps(e.stats, sort_keys=True)}", returncode=EXIT_RESOURCE)
        except ConsistencyError as e:
            raise CommandError(f"consistency failure: {e} {json.dumps(e.diagnostics, sort_keys=True, default=str)}", returncode=EXIT_CONSISTENCY)
        except ValidationError as e:
            raise CommandError(f"report failed validation: {e.detail}", returncode=EXIT_CONSISTENCY)
        except (PolytopeError, ValueError) as e:
            raise CommandError(str(e), returncode=EXIT_USAGE)

        if options["as_json"]:
            self.stdout.write(json.dumps(data, sort_keys=True, indent=2))
        elif subcommand == "search":
            self.stdout.write(self.format_search(data))
        else:
            self.stdout.write(self.format_report(data))

    def format_report(self, data):
        lines = [
            f"{data['name'] or 'system'}: rank {data['rank']}, order {data['order']}, type {{{','.join(map(str, data['type']))}}}",
            f"status: {data['status']}",
        ]
        verdict = data["intersection"]
        if verdict["holds"]:
            lines.append(f"intersection property: holds ({len(verdict['checks'])} checks)")
        else:
            w = verdict["witness"]
            lines.append(
                f"intersection property: fails at <{w['left']}> & <{w['right']}>, "
                f"orders {w['orders']}, expected {w['expected']}"
            )
        lines.append(f"reflexible: {'yes' if data['reflexible'] else 'no'}")
        if data["kappa"] is not None:
            group = data["chirality_group"]
            label = f" ({group['name']})" if group["name"] else ""
            lines.append(
                f"chirality index: {data['kappa']}{label}, perfect {group['perfect']}, "
                f"totally chiral {data['totally_chiral']}"
            )
        lines.append(f"self-duality: {data['self_duality']}")
        if data.get("direct_product") is not None:
            lines.append(f"direct product: {'yes' if data['direct_product'] else 'no'} (components {data['components']})")
        if data.get("faces"):
            faces = data["faces"]
            lines.append(f"faces: f-vector {tuple(faces['f_vector'])}, {faces['flags']} flags, diamond {'ok' if faces['diamond'] else 'violated'}")
        if data.get("period_witness"):
            lines.append(f"period witness: {data['period_witness']}")
        if data["degenerate"]:
            lines.append(f"degenerate generators: {data['degenerate']}")
        lines.extend(f"note: {n}" for n in data["notes"])
        return "\n".join(lines)

    def format_search(self, data):
        group = data["group"]
        lines = [f"{group['name']} (order {group['order']}), type {data['type']}: {data['count']} tuples"]
        for r in data["results"]:
            flags = []
            flags.append("reflexible" if r["reflexible"] else "chiral")
            if not r["intersection_property"]:
                flags.append("no intersection property")
            lines.append(f"  {r['name']}: {' '.join(r['generators'])} [{', '.join(flags)}]")
        return "\n".join(lines)
