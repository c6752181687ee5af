/**
 * Top-down path map: waypoints, capture circles, breadcrumb trail, drone.
 * World x is east (screen right), world y is north (screen up).
 */
export function fitTransform(points, width, height, margin = 20) {
    let minX = Infinity;
    let maxX = -Infinity;
    let minY = Infinity;
    let maxY = -Infinity;
    for (const [x, y] of points) {
        minX = Math.min(minX, x);
        maxX = Math.max(maxX, x);
        minY = Math.min(minY, y);
        maxY = Math.max(maxY, y);
    }
    const spanX = Math.max(maxX - minX, 1e-9);
    const spanY = Math.max(maxY - minY, 1e-9);
    const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
    return {
        scale,
        offsetX: margin - minX * scale + (width - 2 * margin - spanX * scale) / 2,
        offsetY: margin - minY * scale + (height - 2 * margin - spanY * scale) / 2,
        height,
    };
}
export function project(tf, x, y) {
    return [x * tf.scale + tf.offsetX, tf.height - (y * tf.scale + tf.offsetY)];
}
export function renderMap(ctx, width, height, path, trail, drone, waypointsHit) {
    const pts = path.waypoints.map((w) => [w[0], w[1]]);
    const tf = fitTransform(pts.concat(trail), width, height);
    ctx.clearRect(0, 0, width, height);
    ctx.strokeStyle = "#777";
    ctx.lineWidth = 1;
    ctx.beginPath();
    pts.forEach(([x, y], i) => {
        const [px, py] = project(tf, x, y);
        if (i === 0)
            ctx.moveTo(px, py);
        else
            ctx.lineTo(px, py);
    });
    ctx.stroke();
    pts.forEach(([x, y], i) => {
        const [px, py] = project(tf, x, y);
        ctx.strokeStyle = i < waypointsHit ? "#2e9e4f" : "#777";
        ctx.beginPath();
        ctx.arc(px, py, Math.max(path.captureRadius * tf.scale, 3), 0, 2 * Math.PI);
        ctx.stroke();
    });
    if (trail.length > 1) {
        ctx.strokeStyle = "#3a76c4";
        ctx.beginPath();
        trail.forEach(([x, y], i) => {
            const [px, py] = project(tf, x, y);
            if (i === 0)
                ctx.moveTo(px, py);
            else
                ctx.lineTo(px, py);
        });
        ctx.stroke();
    }
    if (drone) {
        const [px, py] = project(tf, drone[0], drone[1]);
        ctx.fillStyle = "#c43a3a";
        ctx.beginPath();
        ctx.arc(px, py, 4, 0, 2 * Math.PI);
        ctx.fill();
    }
}
