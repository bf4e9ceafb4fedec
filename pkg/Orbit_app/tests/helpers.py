def markdown_to_rows(text: str) -> list:
    """Reads a table written by markdown_table back into dicts; digit cells become ints."""
    lines = [line for line in text.strip().split("\n") if line.startswith("|")]
    keys = [k.strip() for k in lines[0].split("|")]
    rows = []
    for line in lines[2:]:
        cells = line.split("|")
        rows.append({
            keys[i]: int(v.strip()) if v.strip().isdigit() else v.strip()
            for i, v in enumerate(cells)
            if 0 < i < len(keys) - 1
        })
    return rows
