#!/usr/bin/env python3
"""
pencil-moduli 打包脚本
用 PyInstaller 生成单文件命令行程序，冒烟运行一次，再把配置、文档与 schema 复制到 release/
"""

import os
import sys
import shutil
import subprocess
import logging
from pathlib import Path

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

APP_NAME = 'pencil-moduli'
ROOT = Path(__file__).resolve().parent
GENERATED = ('build', 'dist', 'release', f'{APP_NAME}.spec')
# 随可执行文件发布的文件；schema 同时打进包内供 report.validate 使用
RELEASE_FILES = ('README.md', 'config.json', 'docs', 'cli/schemas')
SMOKE_ARGS = ('decide', '--curve', 'X^3+Y^3+Z^3', '--point', '1,0,0')


def _run(cmd, **kwargs) -> subprocess.CompletedProcess:
    logger.info(f"执行命令: {' '.join(str(c) for c in cmd)}")
    return subprocess.run(cmd, check=True, cwd=ROOT, **kwargs)


def clean():
    """删除上次打包的产物"""
    for name in GENERATED:
        target = ROOT / name
        if target.is_dir():
            shutil.rmtree(target)
        elif target.exists():
            target.unlink()
        else:
            continue
        logger.info(f"已清理: {name}")


def install_requirements() -> bool:
    try:
        _run([sys.executable, '-m', 'pip', 'install', '-r', 'requirements.txt'])
    except subprocess.CalledProcessError as e:
        logger.error(f"依赖安装失败: {e}")
        return False
    return True


def build_executable() -> bool:
    separator = ';' if os.name == 'nt' else ':'
    cmd = [
        sys.executable, '-m', 'PyInstaller', 'main.py',
        '--onefile', '--clean', '--name', APP_NAME,
        '--add-data', f"cli/schemas{separator}cli/schemas",
        # 命令行程序不需要 Tk
        '--exclude-module', 'tkinter',
    ]
    try:
        _run(cmd, capture_output=True, text=True)
    except subprocess.CalledProcessError as e:
        logger.error(f"PyInstaller 失败: {e}")
        for stream in (e.stdout, e.stderr):
            if stream:
                logger.error(stream[-2000:])
        return False
    return True


def executable_path() -> Path:
    return ROOT / 'dist' / (f'{APP_NAME}.exe' if os.name == 'nt' else APP_NAME)


def smoke_test(exe: Path) -> bool:
    """用打包后的程序跑一条 decide，确认 schema 与依赖都已打进包内"""
    try:
        result = _run([str(exe), *SMOKE_ARGS], capture_output=True, text=True, timeout=120)
    except (subprocess.CalledProcessError, subprocess.TimeoutExpired) as e:
        logger.error(f"冒烟运行失败: {e}")
        return False
    if '"constant": true' not in result.stdout:
        logger.error(f"冒烟运行输出异常:\n{result.stdout}")
        return False
    logger.info("冒烟运行通过")
    return True


def assemble_release(exe: Path):
    release = ROOT / 'release'
    release.mkdir(parents=True, exist_ok=True)
    shutil.copy2(exe, release)
    for name in RELEASE_FILES:
        source = ROOT / name
        if source.is_dir():
            shutil.copytree(source, release / name, dirs_exist_ok=True)
        elif source.exists():
            shutil.copy2(source, release)
        else:
            logger.warning(f"缺少发布文件: {name}")
            continue
        logger.info(f"已复制: {name}")
    size_mb = exe.stat().st_size / (1024 * 1024)
    logger.info(f"release/ 已生成，可执行文件 {size_mb:.1f} MB")


def main() -> int:
    logger.info(f"=== {APP_NAME} 打包开始（{sys.platform}）===")
    clean()
    if not install_requirements() or not build_executable():
        return 1
    exe = executable_path()
    if not exe.exists():
        logger.error(f"未找到可执行文件: {exe}")
        return 1
    if not smoke_test(exe):
        return 1
    assemble_release(exe)
    return 0


if __name__ == "__main__":
    sys.exit(main())
