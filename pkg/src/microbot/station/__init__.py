"""Base-station side: scenario orchestration, telemetry, decoding, and serving."""
