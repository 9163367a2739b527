import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from django.conf import settings

from groups.conf import override_limits
from groups.fp import STRING, Presentation
from groups.perm import PermGroup

from .catalog import CATALOG, l2, named, search_tuples
from .chirality import ChiralityReport, classify
from .mix import classify_mix, mix
from .parsers import load_presentation
from .rotation import IntersectionCheck, RotationSystem, rotation_system, string_rotation_system
from .serializers import ReportSerializer, SearchReportSerializer

logger = logging.getLogger(__name__)

# Fields that must come out the same when a report's job is run again.
VERDICT_FIELDS = ("order", "type", "status", "reflexible", "kappa", "self_duality", "intersection", "count")


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _check_data(check: IntersectionCheck) -> Dict[str, Any]:
    return {
        "left": list(check.left),
        "right": list(check.right),
        "orders": list(check.orders),
        "expected": check.expected_order,
        "holds": check.holds,
    }


class PolytopeService:
    """
    Runs one CLI job and returns its report as validated serializer data.

    Caps given here apply for the duration of each job only.
    """

    def __init__(
        self,
        max_cosets: Optional[int] = None,
        faces: bool = False,
        witness_length: int = 0,
        progress: bool = False,
    ):
        self.max_cosets = max_cosets
        self.faces = faces
        self.witness_length = witness_length
        self.progress = progress

    def _params(self) -> Dict[str, Any]:
        return {"max_cosets": self.max_cosets, "faces": self.faces}

    def system_from_presentation(self, p: Presentation, name: Optional[str] = None) -> RotationSystem:
        if p.kind == STRING:
            return string_rotation_system(p, name=name)
        return rotation_system(p, name=name)

    def load_system(self, path: str) -> RotationSystem:
        return self.system_from_presentation(load_presentation(path), name=Path(path).stem)

    def report_data(self, report: ChiralityReport, job: Dict[str, Any], metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Flatten a ChiralityReport into the JSON report layout."""
        verdict = report.intersection
        faces = None
        if report.lattice is not None:
            faces = {
                "f_vector": list(report.lattice.counts),
                "flags": report.lattice.flag_count,
                "diamond": report.lattice.diamond_ok,
                "violations": list(report.lattice.violations),
            }
        data = {
            "schema_version": settings.REPORT_SCHEMA_VERSION,
            "job": job,
            "name": report.name,
            "rank": report.rank,
            "order": report.order,
            "type": list(report.type_vector),
            "degenerate": list(report.degenerate),
            "status": report.status,
            "polytopal": report.polytopal,
            "reflexible": report.reflexible,
            "self_duality": report.self_duality,
            "kappa": report.chirality_index,
            "totally_chiral": report.totally_chiral,
            "chirality_group": report.fingerprint,
            "method_agreement": report.method_agreement,
            "intersection": {
                "holds": verdict.holds,
                "witness": _check_data(verdict.witness) if verdict.witness else None,
                "checks": [_check_data(c) for c in verdict.checks],
            },
            "faces": faces,
            "full_order": report.full_order,
            "period_witness": report.period_witness,
            "direct_product": report.direct_product,
            "components": list(report.components) if report.components else None,
            "metadata": _jsonable(metadata or {}),
            "notes": list(report.notes),
        }
        return self.validated(data, ReportSerializer)

    def validated(self, data: Dict[str, Any], serializer_class) -> Dict[str, Any]:
        """Round the data through its serializer so output and re-read input share one schema."""
        serializer = serializer_class(data=data)
        serializer.is_valid(raise_exception=True)
        return json.loads(json.dumps(serializer_class(data).data))

    def check(self, path: str) -> Dict[str, Any]:
        """
        Classify the system of one presentation file.

        Args:
            path: Presentation file

        Returns:
            Report data (schema ``ReportSerializer``)
        """
        with override_limits(MAX_COSETS=self.max_cosets):
            sys = self.load_system(path)
            report = classify(sys, faces=self.faces, witness_length=self.witness_length)
        job = {"command": "check", "inputs": [str(path)], "params": self._params()}
        return self.report_data(report, job, sys.metadata)

    def mix(self, path_a: str, path_b: str) -> Dict[str, Any]:
        with override_limits(MAX_COSETS=self.max_cosets):
            m = mix(self.load_system(path_a), self.load_system(path_b))
            report = classify_mix(m, faces=self.faces)
        job = {"command": "mix", "inputs": [str(path_a), str(path_b)], "params": self._params()}
        return self.report_data(report, job)

    def catalog(self, name: str, args: Sequence[int] = ()) -> Dict[str, Any]:
        with override_limits(MAX_COSETS=self.max_cosets):
            sys = named(name, *args)
            report = classify(sys, faces=self.faces, witness_length=self.witness_length)
        job = {
            "command": "catalog",
            "inputs": [name],
            "params": {**self._params(), "args": list(args)},
        }
        return self.report_data(report, job, sys.metadata)

    def search_group(self, group: str, args: Sequence[int]) -> PermGroup:
        """``l2 p`` or the group of any catalog entry."""
        if group == "l2":
            if len(args) != 1:
                raise ValueError(f"l2 takes one parameter p, got {list(args)}")
            return l2(args[0])
        if group in CATALOG:
            return named(group, *args).group
        raise ValueError(f"Unknown group {group!r}; use l2 or one of {', '.join(sorted(CATALOG))}")

    def search(self, group: str, args: Sequence[int], type_vector: Sequence[int], limit: Optional[int] = None) -> Dict[str, Any]:
        """
        Census of generating tuples of the requested type.

        Args:
            group: ``l2`` or a catalog name
            args: Group parameters
            type_vector: Orders of sigma_1, ..., sigma_{n-1}
            limit: Stop after this many tuples

        Returns:
            Report data (schema ``SearchReportSerializer``)
        """
        if len(type_vector) < 2 or any(p < 2 for p in type_vector):
            raise ValueError(f"type needs at least two entries, each >= 2, got {list(type_vector)}")
        label = f"{group}({','.join(str(a) for a in args)})" if args else group
        with override_limits(MAX_COSETS=self.max_cosets):
            G = self.search_group(group, args)
            systems = search_tuples(G, type_vector, limit=limit, progress=self.progress, label=label)
        results: List[Dict[str, Any]] = [
            {
                "name": sys.name,
                "order": sys.order,
                "type": list(sys.type_vector),
                "generators": [repr(s) for s in sys.sigma],
                "reflexible": sys.metadata["reflexible"],
                "intersection_property": sys.metadata["intersection_property"],
            }
            for sys in systems
        ]
        data = {
            "schema_version": settings.REPORT_SCHEMA_VERSION,
            "job": {
                "command": "search",
                "inputs": [group] + [str(a) for a in args],
                "params": {"max_cosets": self.max_cosets, "type": list(type_vector), "limit": limit},
            },
            "group": {"name": label, "order": G.order, "degree": G.degree},
            "type": list(type_vector),
            "count": len(results),
            "results": results,
        }
        return self.validated(data, SearchReportSerializer)

    def rerun(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """Validate a stored report and run its job again."""
        job = data.get("job", {})
        serializer_class = SearchReportSerializer if job.get("command") == "search" else ReportSerializer
        serializer = serializer_class(data=data)
        serializer.is_valid(raise_exception=True)
        params = job.get("params", {})
        service = PolytopeService(
            max_cosets=params.get("max_cosets"),
            faces=bool(params.get("faces", False)),
            witness_length=self.witness_length,
        )
        command, inputs = job["command"], job["inputs"]
        logger.info(f"Re-running {command} {' '.join(inputs)}")
        if command == "check":
            return service.check(inputs[0])
        if command == "mix":
            return service.mix(inputs[0], inputs[1])
        if command == "catalog":
            return service.catalog(inputs[0], params.get("args", []))
        return service.search(inputs[0], [int(a) for a in inputs[1:]], params["type"], params.get("limit"))

    @staticmethod
    def verdicts(data: Dict[str, Any]) -> Dict[str, Any]:
        return {k: data[k] for k in VERDICT_FIELDS if k in data}
