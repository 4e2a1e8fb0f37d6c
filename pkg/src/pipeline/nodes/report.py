"""Report Node.

실행 기록을 사람이 읽는 요약과 통과 여부로 정리한다.
"""

from src.pipeline.state import AcceptState


def report_node(state: AcceptState) -> dict:
    """past_steps 요약.

    Args:
        state: 현재 상태

    Returns:
        passed와 result가 설정된 상태 업데이트
    """
    past_steps = state.get("past_steps", [])
    lines = []
    for record in past_steps:
        output = record["output"]
        mark = "PASS" if record["status"] == "success" else "FAIL"
        lines.append(f"[{output['criterion']}] {output['name']}: {mark} ({output['seconds']:.1f}s)")
        for failure in output.get("failures", []):
            lines.append(f"    - {failure}")

    passed = bool(past_steps) and all(r["status"] == "success" for r in past_steps)
    lines.append("")
    lines.append(f"{sum(r['status'] == 'success' for r in past_steps)}/{len(past_steps)} 점검 통과")
    return {"passed": passed, "result": "\n".join(lines)}
