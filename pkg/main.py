"""
pencil-moduli 主程序
平面曲线常模数判定的命令行入口
"""
import sys
import os

# 添加当前目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli.app import main
from utils.common import LogUtils

# 配置日志
LogUtils.suppress_third_party_logs()
logger = LogUtils.setup_logger(__name__)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("用户中断，程序退出")
        sys.exit(130)
