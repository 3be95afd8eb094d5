from .system import (ALERT_CATEGORIES, AlertMessage, FpaPayload, IfaPayload, InfoQuery, IvaPayload, OaPayload,
                     QosAgentSystem, RpaPayload, StepResult, VehicleStatus)
from .tables import (PathRecord, QosRequirement, RoutingTable, build_path_record, evict_stale,
                     select_qos_path, update_routing_table)

__all__ = [
    "ALERT_CATEGORIES", "AlertMessage", "FpaPayload", "IfaPayload", "InfoQuery", "IvaPayload", "OaPayload",
    "QosAgentSystem", "RpaPayload", "StepResult", "VehicleStatus", "PathRecord", "QosRequirement",
    "RoutingTable", "build_path_record", "evict_stale", "select_qos_path", "update_routing_table",
]
